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

#include "bcc/generator.hpp"

#include <algorithm>
#include <cctype>
#include <thread>
#include <utility>

namespace bcc {

std::string_view GenKindName(GenKind kind) {
  switch (kind) {
    case GenKind::kFormed:
      return "FORMED";
    case GenKind::kNamed:
      return "NAMED";
    case GenKind::kTyped:
      return "TYPED";
  }
  return "?";
}

std::optional<GenKind> ParseGenKind(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (GenKind k : {GenKind::kFormed, GenKind::kNamed, GenKind::kTyped}) {
    if (GenKindName(k) == upper) return k;
  }
  return std::nullopt;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t CandidateSeed(uint64_t batch_seed, uint64_t j) {
  return SplitMix64(batch_seed ^ SplitMix64(j));
}

// --- Rng ---------------------------------------------------------------------

uint64_t Rng::Below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::Below(0)");
  const uint64_t threshold = (0 - n) % n;
  for (;;) {
    const uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

long long Rng::Between(long long lo, long long hi) {
  if (lo > hi) throw std::invalid_argument("Rng::Between: empty range");
  const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
  if (span == UINT64_MAX) return static_cast<long long>(engine_());
  return static_cast<long long>(static_cast<uint64_t>(lo) + Below(span + 1));
}

double Rng::Unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::Pick(const double* weights, std::size_t n) {
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) total += weights[i];
  if (!(total > 0)) throw std::invalid_argument("Rng::Pick: no positive weight");
  double r = Unit() * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] <= 0) continue;
    if (r < weights[i]) return i;
    r -= weights[i];
    last = i;
  }
  return last;
}

// --- GenConfig ---------------------------------------------------------------

void GenConfig::Validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (int_min > int_max) throw std::invalid_argument("empty literal range");
  if (large_literal_max < 0) {
    throw std::invalid_argument("large_literal_max must be >= 0");
  }
  if (n_candidate_vars < 1 ||
      n_candidate_vars > static_cast<int>(std::size(kVarPool))) {
    throw std::invalid_argument("n_candidate_vars must be in [1, " +
                                std::to_string(std::size(kVarPool)) + "]");
  }
}

// --- program construction ----------------------------------------------------

namespace {

enum StmtKind { kAssign, kAssert, kIf, kWhile };

class Builder {
 public:
  Builder(const GenConfig& cfg, Rng& rng) : cfg_(cfg), w_(cfg.op_weights), rng_(rng) {
    for (int i = 0; i < cfg.n_candidate_vars; ++i) {
      pool_.emplace_back(std::string(kVarPool[i]));
    }
  }

  Program Build() {
    Program p;
    const int max_locals = std::min(cfg_.max_depth, cfg_.n_candidate_vars);
    if (cfg_.kind == GenKind::kFormed) {
      const long long n = rng_.Between(0, max_locals);
      for (long long i = 0; i < n; ++i) {
        const TypeTag t = RandomType();
        p.locals.push_back({PoolName(), t, InitLiteral(RandomType())});
      }
    } else {
      std::vector<VarName> names = pool_;
      for (std::size_t i = names.size(); i > 1; --i) {
        std::swap(names[i - 1], names[rng_.Below(i)]);
      }
      const long long n = rng_.Between(1, max_locals);
      for (long long i = 0; i < n; ++i) {
        const TypeTag t = RandomType();
        const TypeTag init_type =
            cfg_.kind == GenKind::kTyped ? t : RandomType();
        p.locals.push_back({names[i], t, InitLiteral(init_type)});
        declared_.push_back({names[i], t});
      }
    }
    p.body = GenBody(cfg_.max_depth, /*top=*/true);
    return p;
  }

 private:
  bool typed() const { return cfg_.kind == GenKind::kTyped; }

  TypeTag RandomType() { return rng_.Chance(0.5) ? TypeTag::kInt : TypeTag::kBool; }

  VarName PoolName() { return pool_[rng_.Below(pool_.size())]; }

  Literal InitLiteral(TypeTag t) {
    if (t == TypeTag::kBool) return Literal::Bool(rng_.Chance(0.5));
    return Literal::Int(rng_.Between(cfg_.int_min, cfg_.int_max));
  }

  Literal ExprLiteral(TypeTag t) {
    if (t == TypeTag::kBool) return Literal::Bool(rng_.Chance(0.5));
    if (cfg_.large_literal_prob > 0 && rng_.Chance(cfg_.large_literal_prob)) {
      return Literal::Int(
          rng_.Between(-cfg_.large_literal_max, cfg_.large_literal_max));
    }
    return Literal::Int(rng_.Between(cfg_.int_min, cfg_.int_max));
  }

  // Body whose depth is at most `budget`: statement i gets budget - i - 1.
  Body GenBody(int budget, bool top) {
    Body body;
    for (int i = 0; i <= budget - 2; ++i) {
      const bool more = (top && i == 0) ||
                        rng_.Chance(top ? w_.top_continue : w_.nested_continue);
      if (!more) break;
      body.push_back(GenStmt(budget - i - 1));
    }
    return body;
  }

  StmtPtr GenStmt(int budget) {
    const double weights[] = {w_.assign, w_.assert_stmt, w_.if_stmt,
                              w_.while_stmt};
    const int inner = budget - 1;
    switch (rng_.Pick(weights, 4)) {
      case kAssign: {
        if (cfg_.kind == GenKind::kFormed) {
          return AssignStmt(PoolName(), GenUntyped(inner));
        }
        const auto& [name, type] = declared_[rng_.Below(declared_.size())];
        return AssignStmt(name, typed() ? GenTyped(type, inner)
                                        : GenUntyped(inner));
      }
      case kAssert:
        return AssertStmt(Cond(inner));
      case kIf: {
        ExprPtr cond = Cond(inner);
        Body then_body = GenBody(inner, false);
        return IfStmt(std::move(cond), std::move(then_body), GenBody(inner, false));
      }
      default: {
        ExprPtr cond = Cond(inner);
        return WhileStmt(std::move(cond), GenBody(inner, false));
      }
    }
  }

  ExprPtr Cond(int budget) {
    return typed() ? GenTyped(TypeTag::kBool, budget) : GenUntyped(budget);
  }

  double LeafFactor(int budget) const {
    return budget <= 1 ? w_.near_bound_leaf_factor : 1.0;
  }

  BinOp PickBinOp(std::initializer_list<BinOp> ops) {
    std::vector<BinOp> allowed;
    std::vector<double> weights;
    for (BinOp op : ops) {
      if (op == BinOp::kDiv && !cfg_.allow_div) continue;
      allowed.push_back(op);
      weights.push_back(w_.binops[static_cast<int>(op)]);
    }
    return allowed[rng_.Pick(weights.data(), weights.size())];
  }

  const VarName* DeclaredOfType(TypeTag t) {
    std::vector<const VarName*> matches;
    for (const auto& [name, type] : declared_) {
      if (type == t) matches.push_back(&name);
    }
    if (matches.empty()) return nullptr;
    return matches[rng_.Below(matches.size())];
  }

  bool HasDeclared(TypeTag t) const {
    for (const auto& d : declared_) {
      if (d.second == t) return true;
    }
    return false;
  }

  // Type-directed: one weight slot per typing rule concluding `goal`.
  ExprPtr GenTyped(TypeTag goal, int budget) {
    const double leaf = LeafFactor(budget);
    const bool can_nest = budget >= 1;
    enum { kLit, kVar, kUn, kBinA, kBinB };
    double weights[5] = {
        w_.literal * leaf,
        HasDeclared(goal) ? w_.variable * leaf : 0.0,
        can_nest ? w_.unary : 0.0,
        can_nest ? w_.binary : 0.0,
        can_nest && goal == TypeTag::kBool ? w_.binary : 0.0,
    };
    switch (rng_.Pick(weights, 5)) {
      case kLit:
        return LitExpr(ExprLiteral(goal));
      case kVar:
        return VarExpr(*DeclaredOfType(goal));
      case kUn:
        return UnaryExpr(goal == TypeTag::kInt ? UnOp::kNeg : UnOp::kNot,
                         GenTyped(goal, budget - 1));
      case kBinA: {
        if (goal == TypeTag::kInt) {
          BinOp op = PickBinOp({BinOp::kAdd, BinOp::kSub, BinOp::kMul, BinOp::kDiv});
          ExprPtr lhs = GenTyped(TypeTag::kInt, budget - 1);
          return BinaryExpr(op, std::move(lhs), GenTyped(TypeTag::kInt, budget - 1));
        }
        BinOp op = PickBinOp({BinOp::kLt, BinOp::kGt, BinOp::kLe, BinOp::kGe,
                              BinOp::kEqInt});
        ExprPtr lhs = GenTyped(TypeTag::kInt, budget - 1);
        return BinaryExpr(op, std::move(lhs), GenTyped(TypeTag::kInt, budget - 1));
      }
      default: {
        BinOp op = PickBinOp({BinOp::kAnd, BinOp::kOr, BinOp::kImplies,
                              BinOp::kIffEqBool});
        ExprPtr lhs = GenTyped(TypeTag::kBool, budget - 1);
        return BinaryExpr(op, std::move(lhs), GenTyped(TypeTag::kBool, budget - 1));
      }
    }
  }

  ExprPtr GenUntyped(int budget) {
    const double leaf = LeafFactor(budget);
    const bool can_nest = budget >= 1;
    const bool has_var = cfg_.kind == GenKind::kFormed || !declared_.empty();
    double weights[4] = {w_.literal * leaf, has_var ? w_.variable * leaf : 0.0,
                         can_nest ? w_.unary : 0.0, can_nest ? w_.binary : 0.0};
    switch (rng_.Pick(weights, 4)) {
      case 0:
        return LitExpr(ExprLiteral(RandomType()));
      case 1:
        if (cfg_.kind == GenKind::kFormed) return VarExpr(PoolName());
        return VarExpr(declared_[rng_.Below(declared_.size())].first);
      case 2: {
        const std::size_t op = rng_.Pick(w_.unops.data(), w_.unops.size());
        return UnaryExpr(kAllUnOps[op], GenUntyped(budget - 1));
      }
      default: {
        std::array<double, 13> weights_b = w_.binops;
        if (!cfg_.allow_div) weights_b[static_cast<int>(BinOp::kDiv)] = 0;
        const BinOp op = kAllBinOps[rng_.Pick(weights_b.data(), weights_b.size())];
        ExprPtr lhs = GenUntyped(budget - 1);
        return BinaryExpr(op, std::move(lhs), GenUntyped(budget - 1));
      }
    }
  }

  const GenConfig& cfg_;
  const OpWeights& w_;
  Rng& rng_;
  std::vector<VarName> pool_;
  std::vector<std::pair<VarName, TypeTag>> declared_;
};

}  // namespace

Program GenProgram(const GenConfig& cfg, Rng& rng) {
  cfg.Validate();
  return Builder(cfg, rng).Build();
}

Program GenProgram(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return GenProgram(cfg, rng);
}

// --- batches -----------------------------------------------------------------

namespace {
constexpr uint64_t kCandidatesPerWorker = 64;
}  // namespace

BatchGenerator::BatchGenerator(BatchSpec spec, int workers)
    : spec_(std::move(spec)), workers_(std::max(1, workers)) {
  if (spec_.count < 1) throw std::invalid_argument("BatchSpec.count must be >= 1");
  spec_.config.Validate();
}

BatchGenerator::~BatchGenerator() = default;

void BatchGenerator::Refill() {
  const uint64_t n = kCandidatesPerWorker * static_cast<uint64_t>(workers_);
  buffer_first_ = next_candidate_;
  buffer_.assign(n, Program{});
  buffer_pos_ = 0;
  auto work = [&](uint64_t start) {
    for (uint64_t k = start; k < n; k += static_cast<uint64_t>(workers_)) {
      GenConfig cfg = spec_.config;
      cfg.seed = CandidateSeed(spec_.config.seed, buffer_first_ + k);
      buffer_[k] = GenProgram(cfg);
    }
  };
  if (workers_ == 1) {
    work(0);
    return;
  }
  std::vector<std::thread> threads;
  for (int w = 0; w < workers_; ++w) threads.emplace_back(work, w);
  for (std::thread& t : threads) t.join();
}

std::optional<GeneratedProgram> BatchGenerator::Next() {
  if (accepted_ >= spec_.count) return std::nullopt;
  for (;;) {
    if (buffer_pos_ == buffer_.size()) Refill();
    const uint64_t candidate = buffer_first_ + buffer_pos_;
    Program& program = buffer_[buffer_pos_++];
    ++next_candidate_;
    const uint64_t h = StructuralHash(program);
    bool duplicate = false;
    auto [lo, hi] = seen_.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      if (*it->second == program) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      ++rejects_;
      ++consecutive_rejects_;
      if (static_cast<double>(rejects_) >
              spec_.reject_factor * static_cast<double>(spec_.count) ||
          consecutive_rejects_ > spec_.max_consecutive_rejects) {
        throw SaturationError(
            "SATURATION: " + std::to_string(accepted_) + " of " +
                std::to_string(spec_.count) + " distinct programs after " +
                std::to_string(next_candidate_) + " candidates (" +
                std::string(GenKindName(spec_.config.kind)) + ", depth " +
                std::to_string(spec_.config.max_depth) + ")",
            accepted_, next_candidate_);
      }
      continue;
    }
    consecutive_rejects_ = 0;
    auto stored = std::make_shared<const Program>(program);
    seen_.emplace(h, stored);
    attempts_per_accept_.push_back(next_candidate_ - last_accept_candidate_);
    last_accept_candidate_ = next_candidate_;
    GeneratedProgram out{accepted_, candidate,
                         CandidateSeed(spec_.config.seed, candidate),
                         std::move(program)};
    ++accepted_;
    return out;
  }
}

std::vector<GeneratedProgram> GenBatch(const BatchSpec& spec, int workers) {
  BatchGenerator gen(spec, workers);
  std::vector<GeneratedProgram> out;
  out.reserve(std::min<uint64_t>(spec.count, 1 << 16));
  while (auto p = gen.Next()) out.push_back(std::move(*p));
  return out;
}

}  // namespace bcc
