// Copyright 2026 The limdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace limdet {

struct SimplexOptions {
  double initial_step = 0.4;
  double x_tolerance = 1e-10;  // simplex diameter (infinity norm)
  double f_tolerance = 1e-14;  // spread of vertex values
  int max_evaluations = 20000;
  int polish_restarts = 2;     // fresh simplices built around the converged point
};

template <typename Real>
struct BasicSimplexResult {
  Eigen::Matrix<Real, Eigen::Dynamic, 1> x;
  Real value = 0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

template <typename Real, typename F>
BasicSimplexResult<Real> nelder_mead_once(F&& f, const Eigen::Matrix<Real, Eigen::Dynamic, 1>& x0, Real step,
                                          const SimplexOptions& opt, int budget) {
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const Eigen::Index n = x0.size();
  std::vector<Vec> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<Real> vals(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)](i) += step;
  int evals = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = f(pts[i]);
    ++evals;
  }
  std::vector<std::size_t> order(pts.size());
  bool converged = false;

  while (evals < budget) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    Real diameter = 0;
    for (const auto& p : pts) diameter = std::max(diameter, (p - pts[best]).cwiseAbs().maxCoeff());
    if (vals[worst] - vals[best] <= Real(opt.f_tolerance) && diameter <= Real(opt.x_tolerance)) {
      converged = true;
      break;
    }

    Vec centroid = Vec::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= Real(n);

    const Vec reflected = centroid + (centroid - pts[worst]);
    const Real f_reflected = f(reflected);
    ++evals;
    if (f_reflected < vals[best]) {
      const Vec expanded = centroid + Real(2) * (centroid - pts[worst]);
      const Real f_expanded = f(expanded);
      ++evals;
      if (f_expanded < f_reflected) {
        pts[worst] = expanded;
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < vals[worst];
    const Vec contracted = outside ? Vec(centroid + Real(0.5) * (reflected - centroid))
                                   : Vec(centroid + Real(0.5) * (pts[worst] - centroid));
    const Real f_contracted = f(contracted);
    ++evals;
    if (f_contracted < (outside ? f_reflected : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + Real(0.5) * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
      ++evals;
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(it - vals.begin());
  return {pts[idx], vals[idx], evals, converged};
}

}  // namespace detail

/// Derivative-free minimization of f over R^n by the Nelder-Mead simplex
/// method. After convergence the simplex is rebuilt around the best point a
/// few times, which guards against collapse onto a non-stationary point.
template <typename Real, typename F>
BasicSimplexResult<Real> nelder_mead(F&& f, Eigen::Matrix<Real, Eigen::Dynamic, 1> x0,
                                     const SimplexOptions& opt = {}) {
  auto result = detail::nelder_mead_once<Real>(f, x0, Real(opt.initial_step), opt, opt.max_evaluations);
  Real step = Real(opt.initial_step) * Real(0.1);
  for (int round = 0; round < opt.polish_restarts; ++round) {
    const int remaining = opt.max_evaluations - result.evaluations;
    if (remaining <= 0) break;
    auto polished = detail::nelder_mead_once<Real>(f, result.x, step, opt, remaining);
    polished.evaluations += result.evaluations;
    if (polished.value <= result.value) {
      result = std::move(polished);
    } else {
      result.evaluations = polished.evaluations;
    }
    step *= Real(0.1);
  }
  return result;
}

using SimplexResult = BasicSimplexResult<double>;

}  // namespace limdet
