#pragma once

#include <span>
#include <vector>

#include "charwnn/corpus_io.hpp"
#include "charwnn/matrix.hpp"

namespace charwnn {

// N x |T| emission scores; row n holds s(w_n).
using ScoreLattice = Matrix;

// transitions(t, u) scores tag t followed by tag u; start(t) scores a
// sentence starting with t. There is no end-of-sentence score.
struct TransitionParams {
  Matrix transitions;
  Vector start;

  TransitionParams() = default;
  explicit TransitionParams(std::size_t tags) : transitions(tags, tags), start(tags, 0.0) {}

  std::size_t num_tags() const { return start.size(); }
  bool operator==(const TransitionParams&) const = default;
};

struct TransitionGradients {
  Matrix transitions;
  Vector start;

  static TransitionGradients zeros(std::size_t tags) { return {Matrix(tags, tags), Vector(tags, 0.0)}; }
};

// Decode-time constraint forbidding IOB2-illegal moves (O -> I-X,
// B-X/I-X -> I-Y with Y != X, and starting with I-X).
struct TransitionMask {
  std::vector<char> allowed;        // |T| x |T|, row-major
  std::vector<char> start_allowed;  // |T|

  static TransitionMask iob2(const TagSet& tags);
  bool transition(std::size_t from, std::size_t to) const { return allowed[from * start_allowed.size() + to]; }
};

double path_score(const ScoreLattice& emissions, const TransitionParams& trans, std::span<const int> path);

struct Decoded {
  std::vector<int> path;
  double score = 0.0;
};

// Maximum-score path; among exact ties the lexicographically smallest tag
// index sequence. `score` is path_score of the returned path.
Decoded viterbi_decode(const ScoreLattice& emissions, const TransitionParams& trans,
                       const TransitionMask* mask = nullptr);

// log sum over all |T|^N paths of exp(path_score), forward recursion in log space.
double log_partition(const ScoreLattice& emissions, const TransitionParams& trans);

struct LikelihoodResult {
  double value = 0.0;      // log p(gold | sentence) <= 0
  Matrix d_emissions;      // d value / d emissions
  TransitionGradients d_transitions;
};

// Conditional log-likelihood of `gold` with its gradients (indicator minus
// marginal), marginals from forward-backward in log space.
LikelihoodResult log_likelihood(const ScoreLattice& emissions, const TransitionParams& trans,
                                std::span<const int> gold);

double log_sum_exp(std::span<const double> values);

}  // namespace charwnn
