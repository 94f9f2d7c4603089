#pragma once

// Random expression trees over x, y, z for property tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "skewspin/expr.hpp"

namespace testing {

using skewspin::Expr;
using skewspin::Op;

inline const std::vector<std::string> kXYZ{"x", "y", "z"};

class RandomExpr {
 public:
  explicit RandomExpr(unsigned seed) : rng_(seed) {}

  Expr make(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 12);
    switch (pick(rng_)) {
      case 0: return literal();
      case 1: {
        std::uniform_int_distribution<int> v(0, 2);
        return Expr::symbol(kXYZ[v(rng_)]);
      }
      case 2: return Expr::unary(Op::Neg, make(depth - 1));
      case 3: return Expr::binary(Op::Add, make(depth - 1), make(depth - 1));
      case 4: return Expr::binary(Op::Sub, make(depth - 1), make(depth - 1));
      case 5: return Expr::binary(Op::Mul, make(depth - 1), make(depth - 1));
      case 6: return Expr::binary(Op::Div, make(depth - 1), make(depth - 1));
      case 7: return Expr::binary(Op::Pow, make(depth - 1), make(depth - 1));
      case 8: return Expr::unary(Op::Exp, make(depth - 1));
      case 9: return Expr::unary(Op::Log, make(depth - 1));
      case 10: return Expr::unary(Op::Sin, make(depth - 1));
      case 11: return Expr::unary(Op::Cos, make(depth - 1));
      default: return Expr::unary(Op::Sqrt, make(depth - 1));
    }
  }

  std::mt19937& rng() { return rng_; }

 private:
  Expr literal() {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    switch (kind(rng_)) {
      case 0: return Expr::number(std::round(u(rng_)));
      case 1: return Expr::number(std::abs(std::round(u(rng_) * 100.0)) / 100.0);
      case 2: return Expr::number(u(rng_));
      default: return Expr::number(u(rng_) * 1e-7);
    }
  }

  std::mt19937 rng_;
};

}  // namespace testing
