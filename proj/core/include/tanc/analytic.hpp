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

#pragma once

// Achievability of the PCA lower bound on the butterfly network: dimension
// counts that any optimal code must respect, span conditions under which an
// optimal code exists, and the construction of that code.

#include "tanc/code.hpp"
#include "tanc/model.hpp"
#include "tanc/subspace.hpp"

namespace tanc {

struct ConditionReport {
  bool eigengap_ok3 = false;
  bool eigengap_ok4 = false;
  int r_plus_34 = 0;   // dim(col U3 + col U4)
  int r_minus_34 = 0;  // dim(col U3 ∩ col U4)
  int r_minus_13 = 0;  // dim(col U1 ∩ col U3)
  int r_minus_24 = 0;  // dim(col U2 ∩ col U4)
  bool necessary_ok = false;
  bool sf1_ok = false;
  bool sf2_ok = false;
  bool corollary_nc_free = false;  // col U3 ∩ col U4 inside col U1 ∩ col U2
  bool corollary_dim = false;      // n <= z + min(a, b)
  bool sufficient_ok = false;
};

// Fills the dimension counts and necessary_ok. When an eigen-gap is not
// positive, necessary_ok is advisory only (eigengap_ok3/4 say so).
ConditionReport necessary_report(const TaskSpectrum& spec, const ProblemInstance& instance,
                                 const ToleranceConfig& tol = {});

// necessary_report plus the span conditions and the two corollary flags.
ConditionReport sufficient_report(const TaskSpectrum& spec, const ProblemInstance& instance,
                                  const ToleranceConfig& tol = {});

// Link spans of a code attaining the lower bound. Throws PreconditionNotMet
// unless sufficient_report(...).sufficient_ok.
CodeSpans construct_lb_spans(const TaskSpectrum& spec, const ProblemInstance& instance,
                             const ToleranceConfig& tol = {});

ButterflyCode construct_lb_code(const TaskSpectrum& spec, const ProblemInstance& instance,
                                const ToleranceConfig& tol = {});
ButterflyCode construct_lb_code(const ProblemInstance& instance, const ToleranceConfig& tol = {});

}  // namespace tanc
