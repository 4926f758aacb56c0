#include "slam/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slam {

namespace {

std::vector<std::string> used_tokens(const Labeling& l) {
  std::vector<char> used(l.num_labels(), 0);
  for (int c : l.codes()) used[static_cast<std::size_t>(c - 1)] = 1;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (used[i]) out.push_back(l.label_space()[i]);
  }
  return out;
}

// Members of each used label, in used-token order.
std::vector<std::vector<std::size_t>> members(const Labeling& l, const std::vector<std::string>& tokens) {
  std::vector<int> slot(l.num_labels() + 1, -1);
  for (std::size_t i = 0; i < tokens.size(); ++i) slot[static_cast<std::size_t>(*l.code_of(tokens[i]))] = static_cast<int>(i);
  std::vector<std::vector<std::size_t>> out(tokens.size());
  for (std::size_t s = 0; s < l.size(); ++s) out[static_cast<std::size_t>(slot[static_cast<std::size_t>(l.codes()[s])])].push_back(s);
  return out;
}

// Index of the largest entry; the first one wins ties.
template <class F>
std::size_t argmax(std::size_t count, F value, const std::vector<char>* skip = nullptr) {
  std::size_t best = count;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    if (skip && (*skip)[i]) continue;
    const double v = value(i);
    if (best == count || v > best_v) {
      best = i;
      best_v = v;
    }
  }
  return best;
}

double dist_min(const Point2& p, const std::vector<std::size_t>& set, const std::vector<Point2>& coords) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j : set) best = std::min(best, squared_distance(p, coords[j]));
  return std::sqrt(best);
}

}  // namespace

JaccardMatrix jaccard_matrix(const Labeling& pred, const Labeling& truth) {
  if (pred.size() != truth.size()) throw MatchingError(MatchingErrorKind::SizeMismatch, "labelings differ in length");
  JaccardMatrix jm;
  jm.pred_tokens = used_tokens(pred);
  jm.truth_tokens = used_tokens(truth);
  const auto cp = members(pred, jm.pred_tokens);
  const auto ct = members(truth, jm.truth_tokens);
  // Contingency counts via a dense code map.
  std::vector<int> prow(pred.num_labels() + 1, -1);
  std::vector<int> tcol(truth.num_labels() + 1, -1);
  for (std::size_t i = 0; i < jm.pred_tokens.size(); ++i) prow[static_cast<std::size_t>(*pred.code_of(jm.pred_tokens[i]))] = static_cast<int>(i);
  for (std::size_t i = 0; i < jm.truth_tokens.size(); ++i) tcol[static_cast<std::size_t>(*truth.code_of(jm.truth_tokens[i]))] = static_cast<int>(i);
  std::vector<std::vector<std::size_t>> inter(cp.size(), std::vector<std::size_t>(ct.size(), 0));
  for (std::size_t s = 0; s < pred.size(); ++s) {
    ++inter[static_cast<std::size_t>(prow[static_cast<std::size_t>(pred.codes()[s])])]
           [static_cast<std::size_t>(tcol[static_cast<std::size_t>(truth.codes()[s])])];
  }
  jm.J.assign(cp.size(), std::vector<double>(ct.size(), 0.0));
  for (std::size_t u = 0; u < cp.size(); ++u) {
    for (std::size_t v = 0; v < ct.size(); ++v) {
      const std::size_t i = inter[u][v];
      const std::size_t uni = cp[u].size() + ct[v].size() - i;
      jm.J[u][v] = uni == 0 ? 0.0 : static_cast<double>(i) / static_cast<double>(uni);
    }
  }
  return jm;
}

MatchResult match_labels(const Labeling& pred, const Labeling& truth, const SpatialDataset& dataset) {
  if (pred.size() != dataset.size() || truth.size() != dataset.size()) {
    throw MatchingError(MatchingErrorKind::SizeMismatch, "labelings must cover every spot of the dataset");
  }
  JaccardMatrix jm = jaccard_matrix(pred, truth);
  // A previous matching output is returned unchanged.
  if (pred.role() == LabelRole::Matched && pred.label_space() == truth.label_space()) {
    MatchResult same{pred, {}, {}, std::move(jm)};
    for (const auto& t : same.jaccard.pred_tokens) same.assignment[t] = t;
    return same;
  }
  const auto& J = jm.J;
  const std::size_t K1 = jm.pred_tokens.size();
  const std::size_t K = jm.truth_tokens.size();

  // target[u]: truth index of predicted cluster u.
  std::vector<std::size_t> target(K1);
  for (std::size_t u = 0; u < K1; ++u) target[u] = argmax(K, [&](std::size_t v) { return J[u][v]; });

  const auto load = [&](std::size_t v) {
    return static_cast<std::size_t>(std::count(target.begin(), target.end(), v));
  };

  std::vector<std::size_t> spot_target(dataset.size());  // truth index per spot after matching
  auto pred_members = members(pred, jm.pred_tokens);
  const auto truth_members = members(truth, jm.truth_tokens);
  std::vector<SplitRecord> splits;

  if (K1 >= K) {
    for (std::size_t o = 0; o < K; ++o) {
      if (load(o) > 0) continue;
      std::vector<char> struck(K1, 0);
      while (true) {
        const std::size_t tau = argmax(K1, [&](std::size_t u) { return J[u][o]; }, &struck);
        if (tau == K1) {
          throw MatchingError(MatchingErrorKind::ReassignmentExhausted,
                              "no predicted cluster can be reassigned to truth label '" + jm.truth_tokens[o] + "'");
        }
        const std::size_t t = target[tau];
        const std::size_t best_for_t = argmax(K1, [&](std::size_t u) { return J[u][t]; });
        if (load(t) > 1 && tau != best_for_t) {
          target[tau] = o;
          break;
        }
        struck[tau] = 1;
      }
    }
    for (std::size_t u = 0; u < K1; ++u) {
      for (std::size_t s : pred_members[u]) spot_target[s] = target[u];
    }
  } else {
    for (std::size_t u = 0; u < K1; ++u) {
      for (std::size_t s : pred_members[u]) spot_target[s] = target[u];
    }
    const auto& coords = dataset.coords();
    for (std::size_t o = 0; o < K; ++o) {
      if (load(o) > 0) continue;
      const std::size_t tau = argmax(K1, [&](std::size_t u) { return J[u][o]; });
      const std::size_t t = target[tau];
      std::vector<std::size_t> moved;
      std::vector<std::size_t> kept;
      for (std::size_t s : pred_members[tau]) {
        if (dist_min(coords[s], truth_members[o], coords) < dist_min(coords[s], truth_members[t], coords)) {
          moved.push_back(s);
        } else {
          kept.push_back(s);
        }
      }
      if (moved.empty()) {
        throw MatchingError(MatchingErrorKind::EmptySplit, "splitting '" + jm.pred_tokens[tau] + "' for truth label '" +
                                                               jm.truth_tokens[o] + "' selects no spots");
      }
      for (std::size_t s : moved) spot_target[s] = o;
      pred_members[tau] = std::move(kept);
      splits.push_back({jm.pred_tokens[tau], std::move(moved), jm.truth_tokens[o]});
    }
  }

  MatchResult r{Labeling({"_"}), {}, std::move(splits), std::move(jm)};
  const auto& jt = r.jaccard;
  for (std::size_t u = 0; u < K1; ++u) {
    if (!pred_members[u].empty()) r.assignment.emplace(jt.pred_tokens[u], jt.truth_tokens[target[u]]);
  }
  std::vector<char> covered(K, 0);
  std::vector<std::string> labels(dataset.size());
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    labels[s] = jt.truth_tokens[spot_target[s]];
    covered[spot_target[s]] = 1;
  }
  for (std::size_t v = 0; v < K; ++v) {
    if (!covered[v]) {
      throw MatchingError(MatchingErrorKind::Uncovered, "truth label '" + jt.truth_tokens[v] + "' left unmatched");
    }
  }
  r.matched = Labeling(std::move(labels), LabelRole::Matched, truth.label_space());
  return r;
}

}  // namespace slam
