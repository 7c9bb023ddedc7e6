// Copyright 2026 The stochprobe Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STOCHPROBE_SIMPLEX_HPP
#define STOCHPROBE_SIMPLEX_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "stochprobe/errors.hpp"

namespace stochprobe {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

/// min c'x  s.t.  A.row(i) x (rel[i]) b(i),  x >= 0.
template <typename Scalar>
struct LinearProgram {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix A;
  Vector b;
  Vector c;
  std::vector<Relation> rel;
};

template <typename Scalar>
struct LpSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar objective;
  std::size_t pivots;
};

namespace detail {

// Dense two-phase tableau. The last row holds reduced costs, the last column
// the right-hand side; T(m, N) is minus the current objective.
template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Tableau(const LinearProgram<Scalar>& lp, Scalar tol) : tol_(tol) {
    const Eigen::Index m = lp.A.rows();
    const Eigen::Index n = lp.A.cols();
    if (lp.b.size() != m || lp.c.size() != n ||
        static_cast<Eigen::Index>(lp.rel.size()) != m)
      throw SolverError("linear program has inconsistent dimensions");

    n_orig_ = n;
    Eigen::Index n_slack = 0, n_art = 0;
    std::vector<Relation> rel = lp.rel;
    std::vector<Scalar> sign(static_cast<std::size_t>(m), Scalar(1));
    for (Eigen::Index i = 0; i < m; ++i) {
      if (lp.b(i) < Scalar(0)) {
        sign[i] = Scalar(-1);
        if (rel[i] == Relation::kLessEqual)
          rel[i] = Relation::kGreaterEqual;
        else if (rel[i] == Relation::kGreaterEqual)
          rel[i] = Relation::kLessEqual;
      }
      if (rel[i] != Relation::kEqual) ++n_slack;
      if (rel[i] != Relation::kLessEqual) ++n_art;
    }
    art_begin_ = n + n_slack;
    cols_ = art_begin_ + n_art;
    T_ = Matrix::Zero(m + 1, cols_ + 1);
    basis_.assign(static_cast<std::size_t>(m), 0);

    Eigen::Index s = n, a = art_begin_;
    for (Eigen::Index i = 0; i < m; ++i) {
      T_.row(i).head(n) = sign[i] * lp.A.row(i);
      T_(i, cols_) = sign[i] * lp.b(i);
      switch (rel[i]) {
        case Relation::kLessEqual:
          T_(i, s) = Scalar(1);
          basis_[i] = s++;
          break;
        case Relation::kGreaterEqual:
          T_(i, s++) = Scalar(-1);
          T_(i, a) = Scalar(1);
          basis_[i] = a++;
          break;
        case Relation::kEqual:
          T_(i, a) = Scalar(1);
          basis_[i] = a++;
          break;
      }
    }
  }

  void phase_one() {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cost =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(cols_);
    cost.tail(cols_ - art_begin_).setOnes();
    price(cost);
    run(cols_);
    if (-T_(rows(), cols_) > tol_ * (Scalar(1) + T_.col(cols_).head(rows()).cwiseAbs().sum()))
      throw SolverError("linear program is infeasible");
    // Pivot remaining zero-level artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < rows(); ++i) {
      if (basis_[i] < art_begin_) continue;
      for (Eigen::Index j = 0; j < art_begin_; ++j) {
        if (std::abs(T_(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  void phase_two(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cost =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(cols_);
    cost.head(n_orig_) = c;
    price(cost);
    run(art_begin_);
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> primal() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n_orig_);
    for (Eigen::Index i = 0; i < rows(); ++i)
      if (basis_[i] < n_orig_) x(basis_[i]) = T_(i, cols_);
    return x;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  Eigen::Index rows() const { return T_.rows() - 1; }

  void price(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& cost) {
    T_.row(rows()).setZero();
    T_.row(rows()).head(cols_) = cost.transpose();
    for (Eigen::Index i = 0; i < rows(); ++i) {
      const Scalar cb = cost(basis_[i]);
      if (cb != Scalar(0)) T_.row(rows()) -= cb * T_.row(i);
    }
  }

  // Bland's rule: lowest-index improving column, lowest-index leaving basic
  // variable among ratio ties. Terminates without cycling.
  void run(Eigen::Index entering_limit) {
    const std::size_t max_pivots = 50 * static_cast<std::size_t>(T_.rows() + T_.cols()) + 1000;
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < entering_limit; ++j) {
        if (T_(rows(), j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const Scalar a = T_(i, enter);
        if (a <= tol_) continue;
        const Scalar ratio = T_(i, cols_) / a;
        if (leave < 0 || ratio < best - tol_) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + tol_ && basis_[i] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) throw SolverError("linear program is unbounded");
      pivot(leave, enter);
      if (pivots_ > max_pivots) throw SolverError("simplex pivot limit exceeded");
    }
  }

  void pivot(Eigen::Index r, Eigen::Index col) {
    T_.row(r) /= T_(r, col);
    for (Eigen::Index i = 0; i < T_.rows(); ++i) {
      if (i == r) continue;
      const Scalar f = T_(i, col);
      if (f != Scalar(0)) T_.row(i) -= f * T_.row(r);
    }
    basis_[r] = col;
    ++pivots_;
  }

  Scalar tol_;
  Matrix T_;
  std::vector<Eigen::Index> basis_;
  Eigen::Index n_orig_ = 0;
  Eigen::Index art_begin_ = 0;
  Eigen::Index cols_ = 0;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Two-phase dense simplex with Bland's rule. Throws SolverError when the
/// program is infeasible, unbounded, or exceeds the pivot limit.
template <typename Scalar>
LpSolution<Scalar> solve_lp(const LinearProgram<Scalar>& lp, Scalar tol = Scalar(1e-10)) {
  detail::Tableau<Scalar> tab(lp, tol);
  tab.phase_one();
  tab.phase_two(lp.c);
  LpSolution<Scalar> sol;
  sol.x = tab.primal();
  sol.objective = lp.c.dot(sol.x);
  sol.pivots = tab.pivots();
  return sol;
}

}  // namespace stochprobe

#endif  // STOCHPROBE_SIMPLEX_HPP
