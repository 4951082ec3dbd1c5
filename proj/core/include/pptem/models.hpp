// Copyright 2026 the pptem project
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

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pptem/model.hpp"

namespace pptem {

// ---- benchmark systems ----------------------------------------------------

/// Mean-reverting constant-elasticity-of-variance diffusion in original
/// coordinates: dX = kappa (mu - X) dt + xi X^theta dB. Requires
/// kappa, mu, xi > 0 and theta in (1/2, 1). The fractional diffusion power
/// is NaN for negative states, so explicit schemes diverge on leaving the
/// positive half-line.
ModelSpec cev(double kappa, double mu, double xi, double theta);

/// The same diffusion after the variance-stabilising change of variables
/// Y = X^(1-theta), which makes the noise additive:
///   dY = (1-theta) [ kappa mu Y^(-theta/(1-theta)) - kappa Y
///                    - (theta xi^2 / 2) Y^(-1) ] dt + (1-theta) xi dB.
ModelSpec cev_lamperti(double kappa, double mu, double xi, double theta);

double cev_to_lamperti(double x, double theta);    // x^(1-theta)
double cev_from_lamperti(double y, double theta);  // y^(1/(1-theta))

/// Generalised mean-reverting interest-rate model
///   dX = [a_m1 X^-1 - a0 + a1 X - a2 X^r] dt + sigma X^rho dB
/// with a2, sigma > 0, a_m1, a0, a1 >= 0, r > 1, rho >= 1 and r + 1 > 2 rho.
ModelSpec ait_sahalia(double a_m1, double a0, double a1, double a2, double sigma, double r,
                      double rho);

/// Scalar Ginzburg-Landau equation
///   dX = (-X^3 + (lambda + sigma^2/2) X) dt + sigma X dB,  lambda, sigma >= 0.
ModelSpec ginzburg_landau(double lambda, double sigma);

struct LotkaVolterraParams {
  double c1 = 50.0, c2 = 30.0, c3 = 20.0;
  double a11 = -55.0, a22 = -10.0, a33 = -15.0;
  double sigma1 = 7.0, sigma2 = 2.0, sigma3 = 5.0;
};

/// Three-species competitive Lotka-Volterra system with a single driving
/// Brownian motion and state-dependent volatility perturbations:
///   dX_i = X_i (c_i + a_ii X_i) dt + X_i (sigma_i + zeta_i(X)) dB.
/// zeta_1 has a pole on the hyperplane 1 + X_1 + X_2 + X_3 = 0, so the
/// coefficients are undefined off the positive cone and explicit schemes
/// absorb (diverge) on domain exit.
ModelSpec lotka_volterra_3d(const LotkaVolterraParams& params = {});

using TimeFn = std::function<double(double)>;

/// SIRS epidemic model with periodic contact/recovery rates and a common
/// noise on the S-I transmission term:
///   dS = [mu(t) - mu(t) S - xi(t) S I] dt - sigma S I dB
///   dI = [xi(t) S I - (mu(t) + gamma(t)) I] dt + sigma S I dB
///   dR = [gamma(t) I - mu(t) R] dt.
ModelSpec sirs(TimeFn mu, TimeFn xi, TimeFn gamma, double sigma);

struct HivParams {
  double n = 1.0;        // recruitment
  double mu1 = 0.5;      // natural removal
  double mu2 = 0.4;      // disease-induced removal
  double xi = 0.5;       // transmission
  double gamma = 0.3;    // progression
  double sigma = 1.0;    // transmission noise
};

/// Susceptible/infected/full-blown-stage epidemic model with noisy
/// transmission; the third component carries no diffusion.
ModelSpec hiv_aids(const HivParams& params = {});

// ---- catalog ----------------------------------------------------------------

using ParamMap = std::map<std::string, double>;

struct ResolvedModel {
  ModelSpec spec;
  StateVector x0;
  double T = 1.0;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<std::pair<std::string, double>> defaults;  // ordered parameter list
  std::function<ResolvedModel(const ParamMap&)> build;
};

/// The built-in benchmark systems, addressable by name. Unknown parameter
/// keys are rejected by build().
const std::vector<CatalogEntry>& model_catalog();

/// Builds a catalog model with the given parameter overrides. Throws
/// std::invalid_argument for unknown names or parameters; the error message
/// lists the available entries.
ResolvedModel make_model(const std::string& name, const ParamMap& overrides = {});

}  // namespace pptem
