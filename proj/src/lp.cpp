// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "cryptorisk/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "cryptorisk/error.hpp"

namespace cryptorisk::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTolerance = 1e-9;
constexpr std::size_t kRefreshEvery = 64;

enum class Status { basic, at_lower, at_upper, free_zero };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& options) : lp_(lp), opt_(options) {
    m_ = lp.a.rows();
    n_ = lp.a.cols();
    total_ = n_ + m_;
    a_.resize(m_, total_);
    a_.leftCols(n_) = lp.a;
    a_.rightCols(m_).setZero();
    lower_.resize(total_);
    upper_.resize(total_);
    lower_.head(n_) = lp.lower;
    upper_.head(n_) = lp.upper;
    lower_.tail(m_).setZero();
    upper_.tail(m_).setConstant(kInf);
    x_.resize(total_);
    status_.assign(static_cast<std::size_t>(total_), Status::at_lower);

    for (Eigen::Index j = 0; j < n_; ++j) {
      const bool want_upper = options.start_at_upper.size() == n_ && options.start_at_upper[j];
      if (want_upper && std::isfinite(upper_[j])) {
        set_nonbasic(j, Status::at_upper);
      } else if (std::isfinite(lower_[j])) {
        set_nonbasic(j, Status::at_lower);
      } else if (std::isfinite(upper_[j])) {
        set_nonbasic(j, Status::at_upper);
      } else {
        set_nonbasic(j, Status::free_zero);
      }
    }
    const Eigen::VectorXd residual = lp.b - lp.a * x_.head(n_);
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = residual[i] < 0.0 ? -1.0 : 1.0;
      a_(i, n_ + i) = sign;
      x_[n_ + i] = std::abs(residual[i]);
      status_[static_cast<std::size_t>(n_ + i)] = Status::basic;
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
  }

  LpResult solve() {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total_);
    phase1.tail(m_).setOnes();
    run(phase1);
    const double infeasibility = x_.tail(m_).sum();
    const double scale = 1.0 + (lp_.b.size() > 0 ? lp_.b.cwiseAbs().maxCoeff() : 0.0);
    if (infeasibility > opt_.feasibility_tolerance * scale * 10.0) {
      fail(ErrorKind::infeasible, fmt::format("linear program is infeasible (residual {:.3g})", infeasibility));
    }
    for (Eigen::Index i = n_; i < total_; ++i) {
      upper_[i] = 0.0;
      if (status_[static_cast<std::size_t>(i)] != Status::basic) set_nonbasic(i, Status::at_lower);
    }
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(total_);
    phase2.head(n_) = lp_.c;
    run(phase2);

    LpResult r;
    r.x = x_.head(n_);
    r.duals = duals(phase2);
    r.objective = lp_.c.dot(r.x);
    r.iterations = iterations_;
    return r;
  }

 private:
  void set_nonbasic(Eigen::Index j, Status s) {
    status_[static_cast<std::size_t>(j)] = s;
    x_[j] = s == Status::at_lower ? lower_[j] : s == Status::at_upper ? upper_[j] : 0.0;
  }

  Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd b(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) b.col(i) = a_.col(basis_[static_cast<std::size_t>(i)]);
    return b;
  }

  Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
    return basis_matrix().transpose().partialPivLu().solve(cb);
  }

  // Basic values from the nonbasic ones.
  void refresh_basic(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    Eigen::VectorXd rhs = lp_.b;
    for (Eigen::Index j = 0; j < total_; ++j) {
      if (status_[static_cast<std::size_t>(j)] != Status::basic && x_[j] != 0.0) rhs -= a_.col(j) * x_[j];
    }
    const Eigen::VectorXd xb = lu.solve(rhs);
    for (Eigen::Index i = 0; i < m_; ++i) x_[basis_[static_cast<std::size_t>(i)]] = xb[i];
  }

  void run(const Eigen::VectorXd& cost) {
    std::size_t degenerate = 0;
    std::size_t since_refresh = kRefreshEvery;
    while (true) {
      if (iterations_ >= opt_.max_iterations) {
        fail(ErrorKind::convergence, "simplex iteration limit reached");
      }
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix());
      if (since_refresh >= kRefreshEvery) {
        refresh_basic(lu);
        since_refresh = 0;
      }
      Eigen::VectorXd cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
      const Eigen::VectorXd y = lu.transpose().solve(cb);
      const Eigen::VectorXd reduced = cost - a_.transpose() * y;

      const bool bland = degenerate >= opt_.degenerate_limit;
      Eigen::Index entering = -1;
      double best = 0.0;
      for (Eigen::Index j = 0; j < total_; ++j) {
        const Status s = status_[static_cast<std::size_t>(j)];
        if (s == Status::basic || lower_[j] == upper_[j]) continue;
        const double dj = reduced[j];
        const bool eligible = (s == Status::at_lower && dj < -opt_.optimality_tolerance) ||
                              (s == Status::at_upper && dj > opt_.optimality_tolerance) ||
                              (s == Status::free_zero && std::abs(dj) > opt_.optimality_tolerance);
        if (!eligible) continue;
        if (bland) {
          entering = j;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          entering = j;
        }
      }
      if (entering < 0) {
        refresh_basic(lu);
        return;
      }

      const double direction = reduced[entering] < 0.0 ? 1.0 : -1.0;
      const Eigen::VectorXd alpha = lu.solve(a_.col(entering));
      double step = upper_[entering] - lower_[entering];  // bound flip
      Eigen::Index leaving = -1;
      double leaving_pivot = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) <= kPivotTolerance) continue;
        const Eigen::Index var = basis_[static_cast<std::size_t>(i)];
        const double rate = -direction * alpha[i];
        double limit = kInf;
        if (rate < 0.0 && std::isfinite(lower_[var])) limit = std::max(0.0, (x_[var] - lower_[var]) / -rate);
        if (rate > 0.0 && std::isfinite(upper_[var])) limit = std::max(0.0, (upper_[var] - x_[var]) / rate);
        if (!std::isfinite(limit)) continue;
        const bool better = limit < step || (limit == step && leaving >= 0 &&
                                             (bland ? var < basis_[static_cast<std::size_t>(leaving)]
                                                    : std::abs(alpha[i]) > leaving_pivot));
        if (better) {
          step = limit;
          leaving = i;
          leaving_pivot = std::abs(alpha[i]);
        }
      }
      if (!std::isfinite(step)) fail(ErrorKind::unbounded, "linear program is unbounded");

      ++iterations_;
      ++since_refresh;
      degenerate = step <= 1e-12 ? degenerate + 1 : 0;
      x_[entering] += direction * step;
      for (Eigen::Index i = 0; i < m_; ++i) x_[basis_[static_cast<std::size_t>(i)]] -= direction * step * alpha[i];

      if (leaving < 0) {
        set_nonbasic(entering, direction > 0.0 ? Status::at_upper : Status::at_lower);
        continue;
      }
      const Eigen::Index out = basis_[static_cast<std::size_t>(leaving)];
      const double rate = -direction * alpha[leaving];
      set_nonbasic(out, rate < 0.0 ? Status::at_lower : Status::at_upper);
      basis_[static_cast<std::size_t>(leaving)] = entering;
      status_[static_cast<std::size_t>(entering)] = Status::basic;
    }
  }

  const LinearProgram& lp_;
  const LpOptions& opt_;
  Eigen::Index m_ = 0, n_ = 0, total_ = 0;
  Eigen::MatrixXd a_;
  Eigen::VectorXd lower_, upper_, x_;
  std::vector<Status> status_;
  std::vector<Eigen::Index> basis_;
  std::size_t iterations_ = 0;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
  const Eigen::Index m = lp.a.rows();
  const Eigen::Index n = lp.a.cols();
  require(lp.c.size() == n && lp.b.size() == m && lp.lower.size() == n && lp.upper.size() == n,
          ErrorKind::shape, "linear program dimensions disagree");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j]) fail(ErrorKind::infeasible, "variable bounds cross");
  }
  Simplex simplex(lp, options);
  return simplex.solve();
}

}  // namespace cryptorisk::lp
