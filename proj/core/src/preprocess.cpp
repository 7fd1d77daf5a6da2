#include "smaug/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

#include "smaug/errors.hpp"

namespace smaug {

namespace {

std::int64_t ms_to_ns(double ms) { return static_cast<std::int64_t>(std::llround(ms * 1e6)); }

std::int64_t ms_bucket(std::int64_t ns) { return ns / 1'000'000; }

std::string pointer_name(int id) { return "pointer " + std::to_string(id); }

}  // namespace

std::vector<std::size_t> event_set_starts(std::span<const TouchEvent> events) {
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const bool fresh = i == 0 || events[i].pointerNumber == 0 ||
                       events[i].pointerNumber != events[i - 1].pointerNumber + 1 ||
                       ms_bucket(events[i].timeNs) != ms_bucket(events[i - 1].timeNs);
    if (fresh) starts.push_back(i);
  }
  return starts;
}

std::vector<TouchEvent> correct_touch_actions(std::span<const TouchEvent> events) {
  std::vector<TouchEvent> out(events.begin(), events.end());

  // next[i]: index of the following event of the same pointer, or npos.
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> next(out.size(), npos);
  std::unordered_map<int, std::size_t> seen;
  for (std::size_t i = out.size(); i-- > 0;) {
    auto it = seen.find(out[i].pointerId);
    if (it != seen.end()) next[i] = it->second;
    seen[out[i].pointerId] = i;
  }

  std::vector<std::size_t> set_of(out.size(), 0);
  {
    const auto starts = event_set_starts(out);
    for (std::size_t s = 0; s < starts.size(); ++s) {
      const auto end = s + 1 < starts.size() ? starts[s + 1] : out.size();
      for (std::size_t i = starts[s]; i < end; ++i) set_of[i] = s;
    }
  }

  // A POINTER_UP of a pointer that is still reported in a later event set
  // (without a fresh down) did not leave: the OS stamped the whole set.
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].action != TouchAction::PointerUp || next[i] == npos) continue;
    if (set_of[next[i]] == set_of[i])
      throw InconsistentStream(pointer_name(out[i].pointerId) + " appears twice in one event set");
    if (!is_down(out[next[i]].action)) out[i].action = TouchAction::Move;
  }

  std::unordered_map<int, bool> active;
  for (const auto& e : out) {
    bool& is_active = active[e.pointerId];
    if (is_down(e.action)) {
      if (is_active) throw InconsistentStream(pointer_name(e.pointerId) + " goes down while active");
      is_active = true;
    } else {
      if (!is_active)
        throw InconsistentStream(pointer_name(e.pointerId) +
                                 " reappears after its up event without a new down");
      if (is_up(e.action)) is_active = false;
    }
  }
  return out;
}

StrokedTouchSet determine_strokes(std::vector<TouchEvent> corrected) {
  StrokedTouchSet set;
  set.events = std::move(corrected);

  struct Building {
    Stroke stroke;
    std::int64_t downNs = 0;
  };
  std::vector<Building> done;
  std::map<int, Building> open;
  int active = 0;
  std::int64_t idle_since = 0;
  bool idle = false;

  for (std::size_t i = 0; i < set.events.size(); ++i) {
    const auto& e = set.events[i];
    if (is_down(e.action)) {
      if (open.count(e.pointerId))
        throw InconsistentStream(pointer_name(e.pointerId) + " goes down while active");
      if (idle && e.timeNs > idle_since) set.gaps.push_back({idle_since, e.timeNs});
      idle = false;
      Building b;
      b.stroke.pointerId = e.pointerId;
      b.stroke.events.push_back(i);
      b.downNs = e.timeNs;
      open.emplace(e.pointerId, std::move(b));
      ++active;
      continue;
    }
    auto it = open.find(e.pointerId);
    if (it == open.end())
      throw InconsistentStream(pointer_name(e.pointerId) + " has an event outside a stroke");
    it->second.stroke.events.push_back(i);
    if (is_up(e.action)) {
      done.push_back(std::move(it->second));
      open.erase(it);
      if (--active == 0) {
        idle = true;
        idle_since = e.timeNs;
      }
    }
  }
  if (!open.empty()) throw UnterminatedStroke(open.begin()->first);

  std::stable_sort(done.begin(), done.end(), [](const Building& a, const Building& b) {
    if (a.downNs != b.downNs) return a.downNs < b.downNs;
    return a.stroke.pointerId < b.stroke.pointerId;
  });
  set.strokes.reserve(done.size());
  for (std::size_t k = 0; k < done.size(); ++k) {
    done[k].stroke.index = static_cast<int>(k);
    set.strokes.push_back(std::move(done[k].stroke));
  }
  return set;
}

std::vector<MotionEvent> snuggle_motion(std::span<const MotionEvent> motion,
                                        std::int64_t firstTouchNs,
                                        std::int64_t lastTouchNs,
                                        double offsetStartMs,
                                        double offsetEndMs) {
  const auto lo = firstTouchNs - ms_to_ns(offsetStartMs);
  const auto hi = lastTouchNs + ms_to_ns(offsetEndMs);
  std::vector<MotionEvent> out;
  for (const auto& e : motion)
    if (e.timeNs >= lo && e.timeNs <= hi) out.push_back(e);
  return out;
}

std::vector<FusionEvent> fuse_motion(std::span<const MotionEvent> gyro,
                                     std::span<const MotionEvent> accel,
                                     double windowMs) {
  const auto window = ms_to_ns(windowMs);
  std::vector<FusionEvent> out;
  std::size_t next = 0;  // first accelerometer sample still available
  for (const auto& g : gyro) {
    if (!out.empty() && g.timeNs <= out.back().timeNs) continue;
    while (next < accel.size() && accel[next].timeNs < g.timeNs - window) ++next;
    std::size_t best = accel.size();
    std::int64_t best_gap = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = next; k < accel.size() && accel[k].timeNs <= g.timeNs + window; ++k) {
      const auto gap = accel[k].timeNs > g.timeNs ? accel[k].timeNs - g.timeNs : g.timeNs - accel[k].timeNs;
      if (gap < best_gap) {
        best_gap = gap;
        best = k;
      }
    }
    if (best == accel.size()) continue;
    out.push_back({g.timeNs, g.v, accel[best].v});
    next = best + 1;
  }
  if (out.empty()) throw EmptyFusion();
  return out;
}

ProcessedRound preprocess(const GestureTrace& trace, const PreprocessParams& params) {
  if (trace.touch.empty()) throw EmptyTouch();
  ProcessedRound round;
  round.meta = trace.meta;
  round.touch = determine_strokes(correct_touch_actions(trace.touch));
  const auto first = round.touch.events.front().timeNs;
  const auto last = round.touch.events.back().timeNs;
  round.gyro = snuggle_motion(trace.gyro, first, last, params.offsetStartMs, params.offsetEndMs);
  round.accel = snuggle_motion(trace.accel, first, last, params.offsetStartMs, params.offsetEndMs);
  try {
    round.fusion = fuse_motion(round.gyro, round.accel, params.fusionWindowMs);
  } catch (const EmptyFusion&) {
    round.fusion.clear();
  }
  return round;
}

}  // namespace smaug
