// Copyright 2026 The hybridfit Authors
//
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

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "commands.hpp"
#include "hybridfit/igrad.hpp"
#include "hybridfit/random.hpp"
#include "hybridfit/refine.hpp"

namespace hybridfit::cli {

namespace {

struct SuiteResult {
  std::string name;
  int instances = 0;
  int skipped = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return instances > 0 && max_error < tolerance; }
};

Vec3 uniform3(Rng& rng, double lo, double hi) {
  const double x = rng.uniform(lo, hi);
  const double y = rng.uniform(lo, hi);
  const double z = rng.uniform(lo, hi);
  return {x, y, z};
}

OrientedBox random_box(Rng& rng) {
  const Vec3 c = uniform3(rng, -2.0, 2.0);
  const Vec3 s = uniform3(rng, 0.5, 2.0);
  return {c, s, rng.uniform(-std::numbers::pi, std::numbers::pi)};
}

PrimitiveSet noisy_instance(Rng& rng, const OrientedBox& truth, double sigma) {
  PrimitiveSet set;
  for (const auto& loc : primitive_locations(truth)) {
    set.add({loc.kind.type(), loc.position + sigma * rng.normal3(), loc.kind.slot()});
  }
  for (int k = 0; k < 3; ++k) {
    const auto type = PrimitiveKind::from_slot(static_cast<int>(rng.uniform_index(19))).type();
    set.add({type, truth.center() + uniform3(rng, -3.0, 3.0), 100 + k});
  }
  return set;
}

// Residuals at least `margin` away from delta and from a same-type runner-up.
bool generic(const PrimitiveSet& preds, const OrientedBox& box, const FitConfig& cfg,
             double margin) {
  const auto locs = primitive_locations(box);
  for (const auto& p : preds) {
    std::vector<double> r;
    for (const auto& l : locs) {
      if (l.kind.type() == p.type) r.push_back((p.position - l.position).squaredNorm());
    }
    std::sort(r.begin(), r.end());
    if (std::abs(r[0] - cfg.delta) < margin) return false;
    if (r.size() > 1 && r[0] < cfg.delta && r[1] - r[0] < margin) return false;
  }
  return true;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double floor) {
  return (a - b).norm() / std::max(b.norm(), floor);
}

PrimitiveSet shifted(const PrimitiveSet& preds, std::size_t j, const Vec3& d) {
  PrimitiveSet out = preds;
  out.set_position(j, out[j].position + d);
  return out;
}

BoxParams box_delta(const OrientedBox& a, const OrientedBox& b) {
  BoxParams d = a.params() - b.params();
  d[6] = wrap_angle(d[6]);
  return d;
}

struct Instance {
  OrientedBox box;
  PrimitiveSet preds;
};

Instance generic_instance(Rng& rng, const FitConfig& cfg, double sigma) {
  for (;;) {
    const OrientedBox truth = random_box(rng);
    Instance in{truth, noisy_instance(rng, truth, sigma)};
    if (generic(in.preds, in.box, cfg, 1e-3)) return in;
  }
}

SuiteResult check_gradient(const RunConfig& cfg) {
  SuiteResult r{"gradient", 0, 0, 0.0, 1e-5};
  Rng rng(derive_seed(cfg.seed, 1));
  const double h = cfg.gradcheck.fd_step;
  for (int i = 0; i < cfg.gradcheck.instances; ++i) {
    const Instance in = generic_instance(rng, cfg.fit, cfg.gradcheck.sigma);
    const BoxParams g = distance_gradient(in.preds, in.box, cfg.fit).gradient;
    BoxParams fd;
    for (int k = 0; k < kNumBoxParams; ++k) {
      BoxParams xp = in.box.params(), xm = xp;
      xp[k] += h;
      xm[k] -= h;
      fd[k] = (distance_value(in.preds, OrientedBox::from_params(xp), cfg.fit) -
               distance_value(in.preds, OrientedBox::from_params(xm), cfg.fit)) /
              (2 * h);
    }
    r.max_error = std::max(r.max_error, rel(g, fd, 1e-6));
    ++r.instances;
  }
  return r;
}

SuiteResult check_hessian(const RunConfig& cfg) {
  SuiteResult r{"hessian", 0, 0, 0.0, 1e-4};
  Rng rng(derive_seed(cfg.seed, 2));
  const double h = cfg.gradcheck.fd_step;
  for (int i = 0; i < cfg.gradcheck.instances; ++i) {
    const Instance in = generic_instance(rng, cfg.fit, cfg.gradcheck.sigma);
    const BoxMatrix hess = distance_hessian(in.preds, in.box, cfg.fit).hessian;
    BoxMatrix fd;
    for (int k = 0; k < kNumBoxParams; ++k) {
      BoxParams xp = in.box.params(), xm = xp;
      xp[k] += h;
      xm[k] -= h;
      fd.col(k) = (distance_gradient(in.preds, OrientedBox::from_params(xp), cfg.fit).gradient -
                   distance_gradient(in.preds, OrientedBox::from_params(xm), cfg.fit).gradient) /
                  (2 * h);
    }
    r.max_error = std::max(r.max_error, rel(hess, fd, 1e-6));
    ++r.instances;
  }
  return r;
}

SuiteResult check_mixed(const RunConfig& cfg) {
  SuiteResult r{"mixed", 0, 0, 0.0, 1e-5};
  Rng rng(derive_seed(cfg.seed, 3));
  const double h = cfg.gradcheck.fd_step;
  for (int i = 0; i < cfg.gradcheck.instances; ++i) {
    const Instance in = generic_instance(rng, cfg.fit, cfg.gradcheck.sigma);
    const Eigen::MatrixXd m = mixed_second_derivative(in.preds, in.box, cfg.fit).matrix;
    Eigen::MatrixXd fd(kNumBoxParams, 3 * in.preds.size());
    for (std::size_t j = 0; j < in.preds.size(); ++j) {
      for (int k = 0; k < 3; ++k) {
        const Vec3 d = h * Vec3::Unit(k);
        fd.col(3 * j + k) =
            (distance_gradient(shifted(in.preds, j, d), in.box, cfg.fit).gradient -
             distance_gradient(shifted(in.preds, j, -d), in.box, cfg.fit).gradient) /
            (2 * h);
      }
    }
    r.max_error = std::max(r.max_error, rel(m, fd, 1e-6));
    ++r.instances;
  }
  return r;
}

FitConfig tight(const FitConfig& base) {
  FitConfig cfg = base;
  cfg.refine.tol_g = 1e-12;
  cfg.refine.tol_x = 1e-14;
  cfg.refine.max_iters = 200;
  return cfg;
}

struct Minimum {
  PrimitiveSet preds;
  OrientedBox box;
  OrientedBox truth;
  ImplicitJacobian jac;
};

// Next well-conditioned stationary instance; counts rejected candidates.
Minimum next_minimum(Rng& rng, const RunConfig& run, const FitConfig& cfg, int& skipped) {
  for (;;) {
    const OrientedBox truth = random_box(rng);
    const PrimitiveSet preds = noisy_instance(rng, truth, run.gradcheck.sigma);
    const RefineTrace t = refine_proposal(truth, preds, cfg);
    if (!t.converged || !generic(preds, t.final_box, cfg, 1e-3)) {
      ++skipped;
      continue;
    }
    try {
      ImplicitJacobian jac = implicit_jacobian(preds, t.final_box, cfg);
      if (jac.condition_estimate < 1e6) return {preds, t.final_box, truth, std::move(jac)};
    } catch (const ImplicitDiffError&) {
    }
    ++skipped;
  }
}

std::pair<SuiteResult, SuiteResult> check_implicit(const RunConfig& run) {
  SuiteResult cols{"implicit", 0, 0, 0.0, 1e-3};
  SuiteResult identity{"identity", 0, 0, 0.0, 1e-8};
  Rng rng(derive_seed(run.seed, 4));
  const FitConfig cfg = tight(run.fit);
  const double h = run.gradcheck.fd_step;
  for (int i = 0; i < run.gradcheck.implicit_instances; ++i) {
    const Minimum mn = next_minimum(rng, run, cfg, cols.skipped);
    identity.max_error = std::max(identity.max_error, mn.jac.identity_residual);
    for (std::size_t j = 0; j < mn.preds.size(); ++j) {
      for (int k = 0; k < 3; ++k) {
        const Vec3 d = h * Vec3::Unit(k);
        const auto plus = refine_proposal(mn.box, shifted(mn.preds, j, d), cfg);
        const auto minus = refine_proposal(mn.box, shifted(mn.preds, j, -d), cfg);
        const BoxParams fd = box_delta(plus.final_box, minus.final_box) / (2 * h);
        const BoxParams col = mn.jac.matrix.col(3 * j + k);
        cols.max_error = std::max(cols.max_error, rel(col, fd, 1e-3));
      }
    }
    ++cols.instances;
    ++identity.instances;
  }
  identity.skipped = cols.skipped;
  return {cols, identity};
}

SuiteResult check_lf_gradient(const RunConfig& run) {
  SuiteResult r{"lf_gradient", 0, 0, 0.0, 1e-3};
  Rng rng(derive_seed(run.seed, 5));
  const FitConfig cfg = tight(run.fit);
  const double h = run.gradcheck.fd_step;
  for (int i = 0; i < run.gradcheck.implicit_instances; ++i) {
    const Minimum mn = next_minimum(rng, run, cfg, r.skipped);
    const Eigen::VectorXd g = lf_gradient({{mn.box, mn.truth, mn.jac}});
    Eigen::VectorXd fd(g.size());
    auto loss = [&](const PrimitiveSet& p) {
      return lm_loss(refine_proposal(mn.box, p, cfg).final_box, mn.truth);
    };
    for (std::size_t j = 0; j < mn.preds.size(); ++j) {
      for (int k = 0; k < 3; ++k) {
        const Vec3 d = h * Vec3::Unit(k);
        fd[3 * j + k] =
            (loss(shifted(mn.preds, j, d)) - loss(shifted(mn.preds, j, -d))) / (2 * h);
      }
    }
    r.max_error = std::max(r.max_error, rel(g, fd, 1e-6));
    ++r.instances;
  }
  return r;
}

}  // namespace

int run_gradcheck(Run& run) {
  const RunConfig& cfg = run.cfg();
  std::vector<SuiteResult> results;
  results.push_back(check_gradient(cfg));
  results.push_back(check_hessian(cfg));
  results.push_back(check_mixed(cfg));
  const auto [cols, identity] = check_implicit(cfg);
  results.push_back(cols);
  results.push_back(identity);
  results.push_back(check_lf_gradient(cfg));

  CsvTable table({"suite", "instances", "skipped", "max_error", "tolerance", "pass"});
  Json suites = Json::array();
  bool all = true;
  std::cout << fmt::format("{:<12} {:>9} {:>8} {:>12} {:>10}  {}\n", "suite", "instances",
                           "skipped", "max_error", "tolerance", "result");
  for (const auto& r : results) {
    all = all && r.pass();
    table.add({r.name, std::to_string(r.instances), std::to_string(r.skipped),
               num(r.max_error), num(r.tolerance), r.pass() ? "1" : "0"});
    suites.push_back({{"suite", r.name},
                      {"instances", r.instances},
                      {"skipped", r.skipped},
                      {"max_error", r.max_error},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass()}});
    std::cout << fmt::format("{:<12} {:>9} {:>8} {:>12.3e} {:>10.0e}  {}\n", r.name,
                             r.instances, r.skipped, r.max_error, r.tolerance,
                             r.pass() ? "PASS" : "FAIL");
  }
  run.write_json("gradcheck.json", {{"suites", suites}, {"pass", all}});
  run.write_csv("gradcheck.csv", table);
  run.finish({{"pass", all}});
  return all ? 0 : 1;
}

}  // namespace hybridfit::cli
