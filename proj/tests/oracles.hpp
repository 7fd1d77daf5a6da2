#pragma once

// Definitional reference implementations used by the unit and acceptance
// tests. Deliberately naive: plain loops, no shared code with the engine.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

namespace smaug::oracle {

inline double am(const std::vector<double>& s) {
  double sum = 0;
  for (double x : s) sum += x;
  return sum / static_cast<double>(s.size());
}

inline double rms(const std::vector<double>& s) {
  double sum = 0;
  for (double x : s) sum += x * x;
  return std::sqrt(sum / static_cast<double>(s.size()));
}

inline double var(const std::vector<double>& s) {
  if (s.size() < 2) return 0;
  const double m = am(s);
  double sum = 0;
  for (double x : s) sum += (x - m) * (x - m);
  return sum / static_cast<double>(s.size() - 1);
}

inline double stdev(const std::vector<double>& s) { return std::sqrt(var(s)); }

inline double mad(const std::vector<double>& s) {
  if (s.size() < 2) return 0;
  const double m = am(s);
  double sum = 0;
  for (double x : s) sum += std::abs(x - m);
  return std::sqrt(sum / static_cast<double>(s.size() - 1));
}

inline double moment(const std::vector<double>& s, int power) {
  const double sd = stdev(s);
  if (s.size() < 2 || sd == 0) return 0;
  const double m = am(s);
  double sum = 0;
  for (double x : s) sum += std::pow((x - m) / sd, power);
  return sum / static_cast<double>(s.size() - 1);
}

inline double skew(const std::vector<double>& s) { return moment(s, 3); }
inline double kurt(const std::vector<double>& s) { return moment(s, 4); }

inline double median(std::vector<double> s) {
  std::sort(s.begin(), s.end());
  const auto n = s.size();
  return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = am(a), mb = am(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0;
  return sab / std::sqrt(saa * sbb);
}

struct Norms {
  double one = 0, inf = 0, frobenius = 0;
  std::vector<double> rowSquared;
};

inline Norms norms(const std::array<std::vector<double>, 3>& cols) {
  Norms n;
  for (const auto& c : cols) {
    double sum = 0;
    for (double x : c) sum += std::abs(x);
    n.one = std::max(n.one, sum);
  }
  double total = 0;
  for (std::size_t i = 0; i < cols[0].size(); ++i) {
    double row = 0, sq = 0;
    for (const auto& c : cols) {
      row += std::abs(c[i]);
      sq += c[i] * c[i];
    }
    n.inf = std::max(n.inf, row);
    n.rowSquared.push_back(sq);
    total += sq;
  }
  n.frobenius = std::sqrt(total);
  return n;
}

/// Angle from the law of cosines, arccos(a.b / (|a||b|)).
inline double angle(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (int k = 0; k < 3; ++k) {
    dot += static_cast<long double>(a[k]) * b[k];
    na += static_cast<long double>(a[k]) * a[k];
    nb += static_cast<long double>(b[k]) * b[k];
  }
  if (na == 0 || nb == 0) return 0;
  long double c = dot / std::sqrt(na * nb);
  c = std::clamp(c, -1.0L, 1.0L);
  return static_cast<double>(std::acos(c));
}

/// First difference quotient per second, skipping non-increasing times.
inline void derive(const std::vector<std::int64_t>& t,
                   const std::vector<double>& v,
                   std::vector<std::int64_t>& tOut,
                   std::vector<double>& vOut) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] <= t[i - 1]) continue;
    vOut.push_back((v[i] - v[i - 1]) / (static_cast<double>(t[i] - t[i - 1]) * 1e-9));
    tOut.push_back(t[i]);
  }
}

/// Top-down memoized recursion straight from the DTW recurrence.
inline double dtw(const std::vector<double>& a, const std::vector<double>& b) {
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  auto d = [&](auto& self, std::size_t i, std::size_t j) -> double {
    if (i == 0 && j == 0) return 0.0;
    if (i == 0 || j == 0) return std::numeric_limits<double>::infinity();
    if (const auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const double cost = std::abs(a[i - 1] - b[j - 1]);
    const double best = std::min({self(self, i - 1, j), self(self, i, j - 1), self(self, i - 1, j - 1)});
    return memo[{i, j}] = cost + best;
  };
  return d(d, a.size(), b.size());
}

/// |a - b| <= tol * max(|b|, 1).
inline bool close(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), 1.0);
}

}  // namespace smaug::oracle
