#include "charwnn/structured_inference.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace charwnn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_shapes(const ScoreLattice& emissions, const TransitionParams& trans) {
  if (emissions.rows() == 0) throw std::invalid_argument("empty score lattice");
  if (emissions.cols() != trans.num_tags() || trans.transitions.rows() != trans.num_tags() ||
      trans.transitions.cols() != trans.num_tags()) {
    throw std::invalid_argument("lattice and transition dimensions differ");
  }
}

void check_path(const ScoreLattice& emissions, std::span<const int> path) {
  if (path.size() != emissions.rows()) throw std::invalid_argument("path length differs from sentence length");
  for (int t : path) {
    if (t < 0 || static_cast<std::size_t>(t) >= emissions.cols()) throw std::invalid_argument("tag index out of range");
  }
}

// alpha(n, t): log-sum of scores of all prefixes ending in tag t at word n.
Matrix forward_scores(const ScoreLattice& emissions, const TransitionParams& trans) {
  const std::size_t n_words = emissions.rows();
  const std::size_t n_tags = emissions.cols();
  Matrix alpha(n_words, n_tags);
  for (std::size_t t = 0; t < n_tags; ++t) alpha(0, t) = trans.start[t] + emissions(0, t);
  Vector terms(n_tags);
  for (std::size_t n = 1; n < n_words; ++n) {
    for (std::size_t u = 0; u < n_tags; ++u) {
      for (std::size_t t = 0; t < n_tags; ++t) terms[t] = alpha(n - 1, t) + trans.transitions(t, u);
      alpha(n, u) = emissions(n, u) + log_sum_exp(terms);
    }
  }
  return alpha;
}

// beta(n, t): log-sum of scores of all suffixes after word n given tag t at n.
Matrix backward_scores(const ScoreLattice& emissions, const TransitionParams& trans) {
  const std::size_t n_words = emissions.rows();
  const std::size_t n_tags = emissions.cols();
  Matrix beta(n_words, n_tags, 0.0);
  Vector terms(n_tags);
  for (std::size_t n = n_words - 1; n-- > 0;) {
    for (std::size_t t = 0; t < n_tags; ++t) {
      for (std::size_t u = 0; u < n_tags; ++u) {
        terms[u] = trans.transitions(t, u) + emissions(n + 1, u) + beta(n + 1, u);
      }
      beta(n, t) = log_sum_exp(terms);
    }
  }
  return beta;
}

}  // namespace

double log_sum_exp(std::span<const double> values) {
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

TransitionMask TransitionMask::iob2(const TagSet& tags) {
  const std::size_t n = tags.size();
  TransitionMask mask{std::vector<char>(n * n, 1), std::vector<char>(n, 1)};
  for (std::size_t u = 0; u < n; ++u) {
    const auto [to_prefix, to_type] = parse_tag(tags.tag(static_cast<int>(u)));
    if (to_prefix != 'I') continue;
    mask.start_allowed[u] = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const auto [from_prefix, from_type] = parse_tag(tags.tag(static_cast<int>(t)));
      if (from_prefix == 'O' || from_type != to_type) mask.allowed[t * n + u] = 0;
    }
  }
  return mask;
}

double path_score(const ScoreLattice& emissions, const TransitionParams& trans, std::span<const int> path) {
  check_shapes(emissions, trans);
  check_path(emissions, path);
  // Same association order as the forward recursion, so a single-path
  // lattice gives log_partition == path_score exactly.
  double score = trans.start[static_cast<std::size_t>(path[0])] + emissions(0, static_cast<std::size_t>(path[0]));
  for (std::size_t n = 1; n < path.size(); ++n) {
    const auto prev = static_cast<std::size_t>(path[n - 1]);
    const auto cur = static_cast<std::size_t>(path[n]);
    score = emissions(n, cur) + (score + trans.transitions(prev, cur));
  }
  return score;
}

Decoded viterbi_decode(const ScoreLattice& emissions, const TransitionParams& trans, const TransitionMask* mask) {
  check_shapes(emissions, trans);
  const std::size_t n_words = emissions.rows();
  const std::size_t n_tags = emissions.cols();
  auto allowed = [&](std::size_t t, std::size_t u) { return !mask || mask->transition(t, u); };

  // best_suffix(n, t): best score of words n..N-1 given tag t at word n.
  // Decoding forward from this table and taking the lowest index among
  // equal candidates yields the lexicographically smallest optimal path.
  Matrix best_suffix(n_words, n_tags);
  for (std::size_t t = 0; t < n_tags; ++t) best_suffix(n_words - 1, t) = emissions(n_words - 1, t);
  for (std::size_t n = n_words - 1; n-- > 0;) {
    for (std::size_t t = 0; t < n_tags; ++t) {
      double best = kNegInf;
      for (std::size_t u = 0; u < n_tags; ++u) {
        if (allowed(t, u)) best = std::max(best, trans.transitions(t, u) + best_suffix(n + 1, u));
      }
      best_suffix(n, t) = emissions(n, t) + best;
    }
  }

  Decoded out;
  out.path.reserve(n_words);
  int chosen = -1;
  double best = kNegInf;
  for (std::size_t t = 0; t < n_tags; ++t) {
    if (mask && !mask->start_allowed[t]) continue;
    const double v = trans.start[t] + best_suffix(0, t);
    if (chosen < 0 || v > best) {
      best = v;
      chosen = static_cast<int>(t);
    }
  }
  if (chosen < 0) throw std::invalid_argument("mask forbids every starting tag");
  out.path.push_back(chosen);
  for (std::size_t n = 1; n < n_words; ++n) {
    const auto prev = static_cast<std::size_t>(out.path.back());
    int next = -1;
    double next_best = kNegInf;
    for (std::size_t u = 0; u < n_tags; ++u) {
      if (!allowed(prev, u)) continue;
      const double v = trans.transitions(prev, u) + best_suffix(n, u);
      if (next < 0 || v > next_best) {
        next_best = v;
        next = static_cast<int>(u);
      }
    }
    if (next < 0) throw std::invalid_argument("mask leaves no successor tag");
    out.path.push_back(next);
  }
  out.score = path_score(emissions, trans, out.path);
  return out;
}

double log_partition(const ScoreLattice& emissions, const TransitionParams& trans) {
  check_shapes(emissions, trans);
  const Matrix alpha = forward_scores(emissions, trans);
  return log_sum_exp(alpha.row(alpha.rows() - 1));
}

LikelihoodResult log_likelihood(const ScoreLattice& emissions, const TransitionParams& trans,
                                std::span<const int> gold) {
  check_shapes(emissions, trans);
  check_path(emissions, gold);
  const std::size_t n_words = emissions.rows();
  const std::size_t n_tags = emissions.cols();
  const Matrix alpha = forward_scores(emissions, trans);
  const Matrix beta = backward_scores(emissions, trans);
  const double log_z = log_sum_exp(alpha.row(n_words - 1));

  LikelihoodResult out;
  out.value = path_score(emissions, trans, gold) - log_z;
  out.d_emissions = Matrix(n_words, n_tags);
  out.d_transitions = TransitionGradients::zeros(n_tags);
  // With one tag the only path has probability 1; skip the marginals, whose
  // rounding would otherwise leak ~1e-16 updates.
  if (n_tags == 1) return out;

  for (std::size_t n = 0; n < n_words; ++n) {
    for (std::size_t t = 0; t < n_tags; ++t) {
      out.d_emissions(n, t) = -std::exp(alpha(n, t) + beta(n, t) - log_z);
    }
    out.d_emissions(n, static_cast<std::size_t>(gold[n])) += 1.0;
  }
  for (std::size_t t = 0; t < n_tags; ++t) out.d_transitions.start[t] = out.d_emissions(0, t);

  for (std::size_t n = 1; n < n_words; ++n) {
    for (std::size_t t = 0; t < n_tags; ++t) {
      for (std::size_t u = 0; u < n_tags; ++u) {
        out.d_transitions.transitions(t, u) -=
            std::exp(alpha(n - 1, t) + trans.transitions(t, u) + emissions(n, u) + beta(n, u) - log_z);
      }
    }
    out.d_transitions.transitions(static_cast<std::size_t>(gold[n - 1]), static_cast<std::size_t>(gold[n])) += 1.0;
  }
  return out;
}

}  // namespace charwnn
