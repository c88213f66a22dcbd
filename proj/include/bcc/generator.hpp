// Copyright 2026 The bcc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random generation of BPL0 programs in three tiers: FORMED (any
// grammar-valid AST), NAMED (passes CheckNames) and TYPED (passes
// CheckTypes, built type-directed from the typing rules).

#ifndef BCC_GENERATOR_HPP_
#define BCC_GENERATOR_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bcc/ast.hpp"

namespace bcc {

enum class GenKind { kFormed, kNamed, kTyped };

// "FORMED", "NAMED", "TYPED"; parsing ignores case.
std::string_view GenKindName(GenKind kind);
std::optional<GenKind> ParseGenKind(std::string_view name);

// Portable bounded draws over mt19937_64 (the standard distributions are
// implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // Uniform in [0, n). Precondition: n > 0.
  uint64_t Below(uint64_t n);
  // Uniform in [lo, hi].
  long long Between(long long lo, long long hi);
  // Uniform in [0, 1).
  double Unit();
  bool Chance(double p) { return Unit() < p; }
  // Index drawn with probability proportional to weights[i]; weights must
  // have a positive sum.
  std::size_t Pick(const double* weights, std::size_t n);

 private:
  std::mt19937_64 engine_;
};

uint64_t SplitMix64(uint64_t x);

struct OpWeights {
  // Statement constructors.
  double assign = 1;
  double assert_stmt = 3;
  double if_stmt = 1;
  double while_stmt = 1.5;
  // Expression constructors. For TYPED, each typing rule whose conclusion
  // matches the goal type gets its constructor weight, so a bool goal
  // splits the binary weight between the comparison and boolean-connective rules.
  double literal = 1;
  double variable = 1;
  double unary = 1;
  double binary = 1;
  // Leaf weight multiplier once at most one level of expression budget
  // remains.
  double near_bound_leaf_factor = 2;
  // Relative operator weights, indexed by BinOp / UnOp.
  std::array<double, 13> binops{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  std::array<double, 2> unops{1, 1};
  // Probability of one more statement in the top-level body / a nested
  // body, while the depth bound allows it.
  double top_continue = 1.0;
  double nested_continue = 0.5;
};

struct GenConfig {
  GenKind kind = GenKind::kTyped;
  int max_depth = 5;
  uint64_t seed = 0;
  long long int_min = -8;
  long long int_max = 8;
  // Probability that an expression-position int literal is drawn from
  // [-large_literal_max, large_literal_max] instead.
  double large_literal_prob = 0.1;
  long long large_literal_max = 1000000;
  int n_candidate_vars = 10;
  OpWeights op_weights;
  bool allow_div = true;

  // Throws std::invalid_argument on a violated invariant.
  void Validate() const;
};

// The fixed variable pool; n_candidate_vars takes a prefix.
inline constexpr std::string_view kVarPool[] = {
    "v0", "v1", "v2", "v3", "v4", "v5", "v6", "v7", "AE", "acc_9"};

Program GenProgram(const GenConfig& cfg, Rng& rng);
// Uses Rng(cfg.seed).
Program GenProgram(const GenConfig& cfg);

struct BatchSpec {
  uint64_t count = 1;
  GenConfig config;
  // Total duplicate rejects tolerated, as a multiple of count.
  double reject_factor = 100;
  // Consecutive duplicate rejects tolerated.
  uint64_t max_consecutive_rejects = 200000;
};

class SaturationError : public std::runtime_error {
 public:
  SaturationError(const std::string& message, uint64_t accepted,
                  uint64_t attempts)
      : std::runtime_error(message), accepted_(accepted), attempts_(attempts) {}
  uint64_t accepted() const { return accepted_; }
  uint64_t attempts() const { return attempts_; }

 private:
  uint64_t accepted_;
  uint64_t attempts_;
};

struct GeneratedProgram {
  uint64_t index;      // 0-based position in the batch
  uint64_t candidate;  // candidate number that produced it
  uint64_t seed;       // GenProgram(config with this seed) regenerates it
  Program program;
};

// Seed of candidate j in a batch seeded with batch_seed.
uint64_t CandidateSeed(uint64_t batch_seed, uint64_t j);

// Streams spec.count pairwise structurally distinct programs. Candidate j
// is GenProgram(config with seed CandidateSeed(config.seed, j)); duplicates
// of earlier candidates are skipped. Worker threads generate candidates
// ahead; the output does not depend on their number.
class BatchGenerator {
 public:
  explicit BatchGenerator(BatchSpec spec, int workers = 1);
  ~BatchGenerator();
  BatchGenerator(const BatchGenerator&) = delete;
  BatchGenerator& operator=(const BatchGenerator&) = delete;

  // nullopt after spec.count programs. Throws SaturationError.
  std::optional<GeneratedProgram> Next();

  uint64_t accepted() const { return accepted_; }
  uint64_t attempts() const { return next_candidate_; }
  // Candidates drawn for each accepted program, in order.
  const std::vector<uint64_t>& attempts_per_accept() const {
    return attempts_per_accept_;
  }

 private:
  void Refill();

  BatchSpec spec_;
  int workers_;
  uint64_t accepted_ = 0;
  uint64_t next_candidate_ = 0;
  uint64_t rejects_ = 0;
  uint64_t consecutive_rejects_ = 0;
  uint64_t last_accept_candidate_ = 0;
  std::vector<uint64_t> attempts_per_accept_;
  std::vector<Program> buffer_;
  std::size_t buffer_pos_ = 0;
  uint64_t buffer_first_ = 0;
  std::unordered_multimap<uint64_t, std::shared_ptr<const Program>> seen_;
};

// Convenience: the whole batch.
std::vector<GeneratedProgram> GenBatch(const BatchSpec& spec, int workers = 1);

}  // namespace bcc

#endif  // BCC_GENERATOR_HPP_
