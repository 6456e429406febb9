/*
 * Copyright 2026 The tanc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tanc/analytic.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "tanc/error.hpp"

namespace tanc {
namespace {

bool gap_ok(double gap, const Eigen::VectorXd& mu, const ToleranceConfig& tol) {
  const double scale = std::max(1.0, mu.size() > 0 ? std::abs(mu(0)) : 0.0);
  return gap > tol.rank_tol * scale;
}

// Column list with at most z entries, padded with zeros to n x z.
class LinkColumns {
 public:
  LinkColumns(const char* name, int n, int z) : name_(name), n_(n), z_(z) {}

  void add(const Eigen::VectorXd& v) {
    if (static_cast<int>(cols_.size()) >= z_) {
      throw Error(ErrorCode::kPreconditionNotMet,
                  std::string(name_) + " needs more than z columns");
    }
    cols_.push_back(v);
  }
  void add_all(const std::vector<Eigen::VectorXd>& vs) {
    for (const auto& v : vs) add(v);
  }
  int size() const { return static_cast<int>(cols_.size()); }
  const std::vector<Eigen::VectorXd>& columns() const { return cols_; }

  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, z_);
    for (int j = 0; j < size(); ++j) m.col(j) = cols_[j];
    return m;
  }

 private:
  const char* name_;
  int n_;
  int z_;
  std::vector<Eigen::VectorXd> cols_;
};

CodeSpans construct_small_block(const TaskSpectrum& spec, const ProblemInstance& instance,
                                const ToleranceConfig& tol) {
  const int n = instance.n, z = instance.z;
  const Basis u1 = spec.span1(tol);
  const Basis u2 = spec.span2(tol);
  const Basis u3 = spec.span3();
  const Basis u4 = spec.span4();
  const Basis common = intersect(u3, u4, tol);
  const int r_minus = common.dim();

  LinkColumns phi13("phi13", n, z), phi24("phi24", n, z), phi56("phi56", n, z);

  // i) private vectors completing the common part to each sink's span.
  phi13.add_all(extend_from_pool(common, intersect(u1, u3, tol), u3, tol));
  phi24.add_all(extend_from_pool(common, intersect(u2, u4, tol), u4, tol));

  // ii) vectors both sources see go to both private links.
  const Basis four_way = intersect(intersect(u1, u2, tol), common, tol);
  const int p = four_way.dim();
  const int need = r_minus - z;
  const int q = std::min(p, need);
  std::vector<Eigen::VectorXd> covered;
  for (int j = 0; j < q; ++j) {
    phi13.add(four_way.vector(j));
    phi24.add(four_way.vector(j));
    covered.push_back(four_way.vector(j));
  }

  // iii) one exclusive vector per source, the relay carries their sum.
  if (p < need) {
    const int t = need - p;
    const Basis f = orthonormal_basis(covered, n, tol);
    const auto g = pick_independent(f, intersect(u1, common, tol), t, tol);
    std::vector<Eigen::VectorXd> fg = covered;
    fg.insert(fg.end(), g.begin(), g.end());
    const auto h = pick_independent(orthonormal_basis(fg, n, tol), intersect(u2, common, tol), t,
                                    tol);
    if (static_cast<int>(g.size()) < t || static_cast<int>(h.size()) < t) {
      throw Error(ErrorCode::kPreconditionNotMet, "not enough coding vectors in the common span");
    }
    for (int j = 0; j < t; ++j) {
      phi13.add(g[j]);
      phi24.add(h[j]);
      phi56.add(g[j] + h[j]);
      covered.push_back(g[j]);
      covered.push_back(h[j]);
    }
  }

  // iv) the relay fills in the rest of the common span.
  phi56.add_all(extend_from_pool(orthonormal_basis(covered, n, tol), common, common, tol));
  return CodeSpans{phi13.matrix(), phi24.matrix(), phi56.matrix()};
}

// Case 2z > n with a <= b; rows[i] is the whitened functional of x_{i+1}.
CodeSpans construct_large_block_ordered(const std::vector<Eigen::VectorXd>& rows, int a, int b,
                                        int z) {
  const int n = static_cast<int>(rows.size());
  LinkColumns phi13("phi13", n, z), phi24("phi24", n, z), phi56("phi56", n, z);
  for (int i = 0; i < n - b; ++i) phi56.add(rows[i] + rows[a + i]);
  for (int i = a + n - b; i < n; ++i) phi56.add(rows[i]);
  for (int i = 0; i < n - b; ++i) {
    phi13.add(rows[i]);
    phi24.add(rows[a + i]);
  }
  // Shared functionals fill the free relay slots first, then node 1's.
  for (int i = n - b; i < a; ++i) {
    if (phi56.size() < z) {
      phi56.add(rows[i]);
    } else {
      phi13.add(rows[i]);
    }
  }
  Eigen::MatrixXd m13 = phi13.matrix();
  Eigen::MatrixXd m24 = phi24.matrix();
  const int tail = z - (n - b);
  m24.rightCols(tail) = m13.rightCols(tail);
  return CodeSpans{m13, m24, phi56.matrix()};
}

CodeSpans construct_large_block(const TaskSpectrum& spec, const ProblemInstance& instance) {
  const int n = instance.n;
  std::vector<Eigen::VectorXd> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = spec.l.row(i).transpose();
  if (instance.a <= instance.b) {
    return construct_large_block_ordered(rows, instance.a, instance.b, instance.z);
  }
  // Mirror the coordinates so the smaller observation comes first.
  std::reverse(rows.begin(), rows.end());
  const CodeSpans m = construct_large_block_ordered(rows, instance.b, instance.a, instance.z);
  return CodeSpans{m.phi24, m.phi13, m.phi56};
}

}  // namespace

ConditionReport necessary_report(const TaskSpectrum& spec, const ProblemInstance& instance,
                                 const ToleranceConfig& tol) {
  ConditionReport r;
  const int n = instance.n, z = instance.z;
  r.eigengap_ok3 = gap_ok(spec.eigengap3, spec.mu3, tol);
  r.eigengap_ok4 = gap_ok(spec.eigengap4, spec.mu4, tol);
  const Basis u3 = spec.span3();
  const Basis u4 = spec.span4();
  const SumAndIntersection si = sum_and_intersection(u3, u4, tol);
  r.r_plus_34 = si.sum.dim();
  r.r_minus_34 = si.intersection.dim();
  r.r_minus_13 = intersect(spec.span1(tol), u3, tol).dim();
  r.r_minus_24 = intersect(spec.span2(tol), u4, tol).dim();
  const int floor = std::min(z, n - z);
  r.necessary_ok = r.r_plus_34 <= 3 * z && r.r_minus_13 >= floor && r.r_minus_24 >= floor;
  r.corollary_dim = n <= z + std::min(instance.a, instance.b);
  return r;
}

ConditionReport sufficient_report(const TaskSpectrum& spec, const ProblemInstance& instance,
                                  const ToleranceConfig& tol) {
  ConditionReport r = necessary_report(spec, instance, tol);
  const Basis u1 = spec.span1(tol);
  const Basis u2 = spec.span2(tol);
  const Basis u3 = spec.span3();
  const Basis u4 = spec.span4();
  const Basis common = intersect(u3, u4, tol);
  r.sf1_ok = span_equal(join(intersect(u1, u3, tol), common, tol), u3, tol);
  r.sf2_ok = span_equal(join(intersect(u2, u4, tol), common, tol), u4, tol);
  r.corollary_nc_free = is_subspace_of(common, intersect(u1, u2, tol), tol);
  r.sufficient_ok = r.necessary_ok && r.sf1_ok && r.sf2_ok;
  return r;
}

CodeSpans construct_lb_spans(const TaskSpectrum& spec, const ProblemInstance& instance,
                             const ToleranceConfig& tol) {
  const ConditionReport report = sufficient_report(spec, instance, tol);
  if (!report.sufficient_ok) {
    throw Error(ErrorCode::kPreconditionNotMet,
                "sufficient conditions fail (r+ = " + std::to_string(report.r_plus_34) +
                    ", r-13 = " + std::to_string(report.r_minus_13) +
                    ", r-24 = " + std::to_string(report.r_minus_24) + ")");
  }
  if (2 * instance.z > instance.n) return construct_large_block(spec, instance);
  return construct_small_block(spec, instance, tol);
}

ButterflyCode construct_lb_code(const TaskSpectrum& spec, const ProblemInstance& instance,
                                const ToleranceConfig& tol) {
  return realize_spans(construct_lb_spans(spec, instance, tol), instance, tol);
}

ButterflyCode construct_lb_code(const ProblemInstance& instance, const ToleranceConfig& tol) {
  return construct_lb_code(spectrum(instance, tol), instance, tol);
}

}  // namespace tanc
