#pragma once

// Brute-force reference implementations used only by the tests. They are
// written from the textbook definitions (pair enumeration, direct entropy
// sums, full distance tables) and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "slam/core.hpp"

namespace oracle {

using Labels = std::vector<int>;

struct PairCounts {
  double same_both = 0;   // a: together in both
  double same_truth = 0;  // b: together in truth only
  double same_pred = 0;   // c: together in pred only
  double apart = 0;       // d: apart in both
};

inline PairCounts pair_counts(const Labels& t, const Labels& p) {
  PairCounts pc;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      const bool st = t[i] == t[j];
      const bool sp = p[i] == p[j];
      if (st && sp) pc.same_both += 1;
      else if (st) pc.same_truth += 1;
      else if (sp) pc.same_pred += 1;
      else pc.apart += 1;
    }
  }
  return pc;
}

// Pair-counting form of the adjusted Rand index.
inline double ari(const Labels& t, const Labels& p) {
  const auto pc = pair_counts(t, p);
  const double a = pc.same_both, b = pc.same_truth, c = pc.same_pred, d = pc.apart;
  const double den = (a + b) * (b + d) + (a + c) * (c + d);
  if (den == 0.0) return 1.0;
  return 2.0 * (a * d - b * c) / den;
}

inline double fmi(const Labels& t, const Labels& p) {
  const auto pc = pair_counts(t, p);
  const double tp = pc.same_both;
  if (tp == 0.0) return 0.0;
  return tp / std::sqrt((tp + pc.same_pred) * (tp + pc.same_truth));
}

inline bool same_partition(const Labels& t, const Labels& p) {
  std::map<int, int> fwd, back;
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto [it, ins] = fwd.emplace(t[i], p[i]);
    if (!ins && it->second != p[i]) return false;
    auto [jt, jns] = back.emplace(p[i], t[i]);
    if (!jns && jt->second != t[i]) return false;
  }
  return true;
}

inline double entropy(const Labels& x) {
  std::map<int, double> cnt;
  for (int v : x) cnt[v] += 1;
  const double n = static_cast<double>(x.size());
  double h = 0.0;
  for (auto& [_, c] : cnt) h -= (c / n) * std::log(c / n);
  return h;
}

inline double joint_entropy(const Labels& t, const Labels& p) {
  std::map<std::pair<int, int>, double> cnt;
  for (std::size_t i = 0; i < t.size(); ++i) cnt[{t[i], p[i]}] += 1;
  const double n = static_cast<double>(t.size());
  double h = 0.0;
  for (auto& [_, c] : cnt) h -= (c / n) * std::log(c / n);
  return h;
}

inline double nmi(const Labels& t, const Labels& p) {
  if (same_partition(t, p)) return 1.0;
  const double ht = entropy(t), hp = entropy(p);
  if (ht == 0.0 || hp == 0.0) return 0.0;
  const double mi = ht + hp - joint_entropy(t, p);
  return std::clamp(mi / std::sqrt(ht * hp), 0.0, 1.0);
}

inline double v_measure(const Labels& t, const Labels& p) {
  if (same_partition(t, p)) return 1.0;
  const double ht = entropy(t), hp = entropy(p), hj = joint_entropy(t, p);
  const double h = ht == 0.0 ? 1.0 : 1.0 - (hj - hp) / ht;  // H(T|P) = H(T,P) - H(P)
  const double c = hp == 0.0 ? 1.0 : 1.0 - (hj - ht) / hp;
  if (h + c == 0.0) return 0.0;
  return std::clamp(2.0 * h * c / (h + c), 0.0, 1.0);
}

// Macro Jaccard over every class token used by either side.
inline double jaccard(const Labels& t, const Labels& p) {
  std::set<int> classes(t.begin(), t.end());
  classes.insert(p.begin(), p.end());
  double acc = 0.0;
  for (int l : classes) {
    std::set<std::size_t> a, b;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] == l) a.insert(i);
      if (p[i] == l) b.insert(i);
    }
    std::set<std::size_t> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(inter, inter.begin()));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(uni, uni.begin()));
    acc += uni.empty() ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
  }
  return acc / static_cast<double>(classes.size());
}

inline double dist(const slam::Point2& a, const slam::Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double asw(const std::vector<slam::Point2>& x, const Labels& l) {
  double total = 0.0;
  std::set<int> cl(l.begin(), l.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::map<int, double> sum;
    std::map<int, double> cnt;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == i) continue;
      sum[l[j]] += dist(x[i], x[j]);
      cnt[l[j]] += 1;
    }
    if (cnt[l[i]] == 0) continue;  // singleton: silhouette 0
    const double a = sum[l[i]] / cnt[l[i]];
    double b = std::numeric_limits<double>::infinity();
    for (int c : cl) {
      if (c != l[i]) b = std::min(b, sum[c] / cnt[c]);
    }
    const double m = std::max(a, b);
    total += m > 0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(x.size());
}

// Directed within-cluster nearest-neighbour distance, summed, over N.
inline double chaos(const std::vector<slam::Point2>& x, const Labels& l) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != i && l[j] == l[i]) best = std::min(best, dist(x[i], x[j]));
    }
    if (std::isfinite(best)) total += best;
  }
  return total / static_cast<double>(x.size());
}

// Ten nearest neighbours by full sort (ties by index); abnormal when at
// least six of them carry another label.
inline double pas(const std::vector<slam::Point2>& x, const Labels& l) {
  std::size_t abnormal = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != i) d.push_back({slam::squared_distance(x[i], x[j]), j});
    }
    std::sort(d.begin(), d.end());
    int differ = 0;
    for (std::size_t k = 0; k < 10; ++k) differ += l[d[k].second] != l[i];
    abnormal += differ >= 6;
  }
  return static_cast<double>(abnormal) / static_cast<double>(x.size());
}

inline std::map<int, slam::Point2> centroids(const std::vector<slam::Point2>& x, const Labels& l) {
  std::map<int, slam::Point2> c;
  std::map<int, double> n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c[l[i]].x += x[i].x;
    c[l[i]].y += x[i].y;
    n[l[i]] += 1;
  }
  for (auto& [k, p] : c) {
    p.x /= n[k];
    p.y /= n[k];
  }
  return c;
}

inline double ch(const std::vector<slam::Point2>& x, const Labels& l) {
  const auto c = centroids(x, l);
  slam::Point2 g;
  for (const auto& p : x) {
    g.x += p.x / static_cast<double>(x.size());
    g.y += p.y / static_cast<double>(x.size());
  }
  std::map<int, double> n;
  for (int v : l) n[v] += 1;
  double between = 0.0, within = 0.0;
  for (auto& [k, p] : c) between += n[k] * slam::squared_distance(p, g);
  for (std::size_t i = 0; i < x.size(); ++i) within += slam::squared_distance(x[i], c.at(l[i]));
  if (within == 0.0) return 1.0;
  const double K = static_cast<double>(c.size());
  return between * (static_cast<double>(x.size()) - K) / (within * (K - 1.0));
}

inline double db(const std::vector<slam::Point2>& x, const Labels& l) {
  const auto c = centroids(x, l);
  std::map<int, double> s, n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s[l[i]] += dist(x[i], c.at(l[i]));
    n[l[i]] += 1;
  }
  for (auto& [k, v] : s) v /= n[k];
  double total = 0.0;
  for (auto& [i, ci] : c) {
    double worst = 0.0;
    for (auto& [j, cj] : c) {
      if (i == j) continue;
      const double d = dist(ci, cj);
      if (d > 0) worst = std::max(worst, (s[i] + s[j]) / d);
    }
    total += worst;
  }
  return total / static_cast<double>(c.size());
}

// Squared 1-D Wasserstein by minimising over every pairing (tiny m only).
inline double w2_1d_bruteforce(std::vector<double> a, std::vector<double> b) {
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[perm[i]]) * (a[i] - b[perm[i]]);
    best = std::min(best, s / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Sort-and-pair in long double.
inline double w2_1d_sorted(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - static_cast<long double>(b[i]);
    s += d * d;
  }
  return static_cast<double>(s / static_cast<long double>(a.size()));
}

// Mutual k-NN edges from a full distance table.
inline std::set<std::pair<std::size_t, std::size_t>> mutual_knn(const std::vector<slam::Point2>& x, std::size_t k) {
  const std::size_t n = x.size();
  std::vector<std::set<std::size_t>> nk(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d.push_back({slam::squared_distance(x[i], x[j]), j});
    }
    std::sort(d.begin(), d.end());
    for (std::size_t t = 0; t < k; ++t) nk[i].insert(d[t].second);
  }
  std::set<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : nk[u]) {
      if (u < v && nk[v].count(u)) e.insert({u, v});
    }
  }
  return e;
}

inline Labels to_ints(const slam::Labeling& l) { return Labels(l.codes().begin(), l.codes().end()); }

}  // namespace oracle
