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

#include "pptem/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pptem {

ModelSpec cev(double kappa, double mu, double xi, double theta) {
  if (!(kappa > 0.0 && mu > 0.0 && xi > 0.0))
    throw std::invalid_argument("cev: kappa, mu, xi must be positive");
  if (!(theta > 0.5 && theta < 1.0)) throw std::invalid_argument("cev: theta must lie in (1/2, 1)");
  ModelSpec m;
  m.d = 1;
  m.m = 1;
  m.drift = [kappa, mu](double, std::span<const double> x, std::span<double> out) {
    out[0] = kappa * (mu - x[0]);
  };
  // x^theta is NaN for x < 0: a sign change poisons the next iterate.
  m.diffusion = [xi, theta](double, std::span<const double> x, std::span<double> out) {
    out[0] = xi * std::pow(x[0], theta);
  };
  m.alpha = 1.0;
  m.beta = 1.0 - theta;  // diffusion derivative blows up like x^(theta-1)
  m.lipschitz_scale = std::max(kappa, xi) + 1.0;
  m.name = "cev";
  return m;
}

double cev_to_lamperti(double x, double theta) { return std::pow(x, 1.0 - theta); }

double cev_from_lamperti(double y, double theta) { return std::pow(y, 1.0 / (1.0 - theta)); }

ModelSpec cev_lamperti(double kappa, double mu, double xi, double theta) {
  if (!(kappa > 0.0 && mu > 0.0 && xi > 0.0))
    throw std::invalid_argument("cev_lamperti: kappa, mu, xi must be positive");
  if (!(theta > 0.5 && theta < 1.0))
    throw std::invalid_argument("cev_lamperti: theta must lie in (1/2, 1)");
  // Ito's formula on Y = X^(1-theta):
  //   dY = (1-theta) [ kappa mu Y^(-theta/(1-theta)) - kappa Y
  //                    - (theta xi^2/2) Y^(-1) ] dt + (1-theta) xi dB.
  const double one_minus = 1.0 - theta;
  const double neg_power = -theta / one_minus;
  const double c_pull = one_minus * kappa * mu;
  const double c_linear = one_minus * kappa;
  const double c_inverse = one_minus * 0.5 * theta * xi * xi;
  const double g_const = one_minus * xi;
  ModelSpec m;
  m.d = 1;
  m.m = 1;
  m.drift = [c_pull, c_linear, c_inverse, neg_power](double, std::span<const double> y,
                                                     std::span<double> out) {
    out[0] = c_pull * std::pow(y[0], neg_power) - c_linear * y[0] - c_inverse / y[0];
  };
  m.diffusion = [g_const](double, std::span<const double>, std::span<double> out) {
    out[0] = g_const;
  };
  m.alpha = theta / one_minus;
  m.beta = 1.0 / one_minus;  // derivative of the y^(-theta/(1-theta)) term
  m.lipschitz_scale = std::max(1.0, kappa + theta * xi * xi);
  m.clamp_rate = 0.4;
  m.name = "cev_lamperti";
  return m;
}

ModelSpec ait_sahalia(double a_m1, double a0, double a1, double a2, double sigma, double r,
                      double rho) {
  if (!(a_m1 >= 0.0 && a0 >= 0.0 && a1 >= 0.0))
    throw std::invalid_argument("ait_sahalia: a_-1, a_0, a_1 must be nonnegative");
  if (!(a2 > 0.0 && sigma > 0.0))
    throw std::invalid_argument("ait_sahalia: a_2 and sigma must be positive");
  if (!(r > 1.0 && rho >= 1.0)) throw std::invalid_argument("ait_sahalia: need r > 1 and rho >= 1");
  if (!(r + 1.0 > 2.0 * rho)) throw std::invalid_argument("ait_sahalia: need r + 1 > 2 rho");
  ModelSpec m;
  m.d = 1;
  m.m = 1;
  m.drift = [a_m1, a0, a1, a2, r](double, std::span<const double> x, std::span<double> out) {
    out[0] = a_m1 / x[0] - a0 + a1 * x[0] - a2 * std::pow(x[0], r);
  };
  m.diffusion = [sigma, rho](double, std::span<const double> x, std::span<double> out) {
    out[0] = sigma * std::pow(x[0], rho);
  };
  // Coefficient growth: the drift derivative scales like x^(r-1).
  m.alpha = std::max(r - 1.0, rho);
  m.beta = 2.0;  // from the x^-1 drift term (derivative x^-2)
  m.lipschitz_scale = std::max({a_m1, a1 + a0, a2 * r, sigma * rho}) + 1.0;
  m.name = "ait_sahalia";
  return m;
}

ModelSpec ginzburg_landau(double lambda, double sigma) {
  if (!(lambda >= 0.0 && sigma >= 0.0))
    throw std::invalid_argument("ginzburg_landau: lambda, sigma must be nonnegative");
  const double c1 = lambda + 0.5 * sigma * sigma;
  ModelSpec m;
  m.d = 1;
  m.m = 1;
  m.drift = [c1](double, std::span<const double> x, std::span<double> out) {
    out[0] = x[0] * (c1 - x[0] * x[0]);
  };
  m.diffusion = [sigma](double, std::span<const double> x, std::span<double> out) {
    out[0] = sigma * x[0];
  };
  m.alpha = 2.0;
  m.beta = 0.5;  // nominal; no singular term
  m.lipschitz_scale = c1 + sigma + 1.0;
  m.name = "ginzburg_landau";
  return m;
}

ModelSpec lotka_volterra_3d(const LotkaVolterraParams& p) {
  ModelSpec m;
  m.d = 3;
  m.m = 1;  // all three species share the single driving noise
  m.drift = [p](double, std::span<const double> x, std::span<double> out) {
    out[0] = x[0] * (p.c1 + p.a11 * x[0]);
    out[1] = x[1] * (p.c2 + p.a22 * x[1]);
    out[2] = x[2] * (p.c3 + p.a33 * x[2]);
  };
  m.diffusion = [p](double, std::span<const double> x, std::span<double> out) {
    const double s = x[0] + x[1] + x[2];
    const double zeta1 = (std::sin(x[0]) + std::sin(x[1]) + std::sin(x[2])) / (1.0 + s);
    const double zeta2 = s / (1.0 + s * s);
    const double zeta3 = (std::cos(x[0]) + std::cos(x[1])) / (1.0 + x[2] * x[2]);
    out[0] = x[0] * (p.sigma1 + zeta1);
    out[1] = x[1] * (p.sigma2 + zeta2);
    out[2] = x[2] * (p.sigma3 + zeta3);
  };
  m.alpha = 1.0;
  m.beta = 0.5;  // nominal
  m.lipschitz_scale = 2.0 * std::max({-p.a11, -p.a22, -p.a33}) + std::max({p.c1, p.c2, p.c3});
  // zeta_1 has a pole at 1 + x1 + x2 + x3 = 0, so the coefficients are not
  // defined on all of R^3; explicit schemes stop at the first domain exit.
  m.absorb_nonpositive = true;
  // The species dip many orders of magnitude below their means; a unit
  // clamp prefactor would pin those excursions at every benchmark step size.
  m.clamp_scale = 100.0;
  m.name = "lotka_volterra_3d";
  return m;
}

ModelSpec sirs(TimeFn mu, TimeFn xi, TimeFn gamma, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sirs: sigma must be positive");
  ModelSpec m;
  m.d = 3;
  m.m = 1;
  m.drift = [mu, xi, gamma](double t, std::span<const double> x, std::span<double> out) {
    const double mu_t = mu(t), xi_t = xi(t), gamma_t = gamma(t);
    const double s = x[0], i = x[1], r = x[2];
    const double infection = xi_t * s * i;
    out[0] = mu_t - mu_t * s - infection;
    out[1] = infection - (mu_t + gamma_t) * i;
    out[2] = gamma_t * i - mu_t * r;
  };
  // The transmission noise moves mass between S and I; the rows cancel
  // exactly, so S + I + R carries no diffusion.
  m.diffusion = [sigma](double, std::span<const double> x, std::span<double> out) {
    const double v = sigma * x[0] * x[1];
    out[0] = -v;
    out[1] = v;
    out[2] = 0.0;
  };
  m.alpha = 1.0;
  m.beta = 0.5;  // nominal
  m.lipschitz_scale = 8.0;
  m.name = "sirs";
  return m;
}

ModelSpec hiv_aids(const HivParams& p) {
  ModelSpec m;
  m.d = 3;
  m.m = 1;
  m.drift = [p](double, std::span<const double> x, std::span<double> out) {
    const double s = x[0], i = x[1], a = x[2];
    const double infection = p.xi * s * i;
    out[0] = p.n - p.mu1 * s - infection;
    out[1] = infection - p.mu1 * i - p.gamma * i;
    out[2] = p.gamma * i - (p.mu1 + p.mu2) * a;
  };
  m.diffusion = [p](double, std::span<const double> x, std::span<double> out) {
    const double v = p.sigma * x[0] * x[1];
    out[0] = -v;
    out[1] = v;
    out[2] = 0.0;
  };
  m.alpha = 1.0;
  m.beta = 0.5;  // nominal
  m.lipschitz_scale = 4.0;
  m.name = "hiv_aids";
  return m;
}

// ---- catalog -----------------------------------------------------------------

namespace {

double get(const ParamMap& params, const std::vector<std::pair<std::string, double>>& defaults,
           const std::string& key) {
  if (auto it = params.find(key); it != params.end()) return it->second;
  for (const auto& [k, v] : defaults) {
    if (k == key) return v;
  }
  throw std::logic_error("catalog default missing for parameter '" + key + "'");
}

void reject_unknown(const ParamMap& params,
                    const std::vector<std::pair<std::string, double>>& defaults,
                    const std::string& model) {
  for (const auto& [key, value] : params) {
    (void)value;
    bool known = false;
    for (const auto& [k, v] : defaults) {
      (void)v;
      if (k == key) {
        known = true;
        break;
      }
    }
    if (!known)
      throw std::invalid_argument("model '" + model + "' has no parameter named '" + key + "'");
  }
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries;

  {
    CatalogEntry e;
    e.name = "cev";
    e.summary = "mean-reverting CEV diffusion dX = kappa(mu-X)dt + xi X^theta dB";
    e.defaults = {{"kappa", 4.0}, {"mu", 0.5}, {"xi", 1.0}, {"theta", 0.55}, {"x0", 2.0}, {"T", 1.0}};
    e.build = [defaults = e.defaults, name = e.name](const ParamMap& p) {
      reject_unknown(p, defaults, name);
      ResolvedModel r;
      r.spec = cev(get(p, defaults, "kappa"), get(p, defaults, "mu"), get(p, defaults, "xi"),
                   get(p, defaults, "theta"));
      r.x0 = {get(p, defaults, "x0")};
      r.T = get(p, defaults, "T");
      return r;
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "cev_lamperti";
    e.summary = "CEV diffusion in variance-stabilised coordinates Y = X^(1-theta)";
    e.defaults = {{"kappa", 4.0}, {"mu", 0.5}, {"xi", 1.0}, {"theta", 0.55}, {"x0", 2.0}, {"T", 1.0}};
    e.build = [defaults = e.defaults, name = e.name](const ParamMap& p) {
      reject_unknown(p, defaults, name);
      const double theta = get(p, defaults, "theta");
      ResolvedModel r;
      r.spec = cev_lamperti(get(p, defaults, "kappa"), get(p, defaults, "mu"),
                            get(p, defaults, "xi"), theta);
      // x0 is given in original coordinates and transformed here.
      r.x0 = {cev_to_lamperti(get(p, defaults, "x0"), theta)};
      r.T = get(p, defaults, "T");
      return r;
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "ait_sahalia";
    e.summary = "generalised interest-rate model with x^-1 pull and x^r reversion";
    e.defaults = {{"a_m1", 3.0}, {"a0", 2.0},  {"a1", 1.0}, {"a2", 5.0}, {"sigma", 2.0},
                  {"r", 4.0},    {"rho", 2.0}, {"x0", 2.0}, {"T", 1.0}};
    e.build = [defaults = e.defaults, name = e.name](const ParamMap& p) {
      reject_unknown(p, defaults, name);
      ResolvedModel r;
      r.spec = ait_sahalia(get(p, defaults, "a_m1"), get(p, defaults, "a0"), get(p, defaults, "a1"),
                           get(p, defaults, "a2"), get(p, defaults, "sigma"), get(p, defaults, "r"),
                           get(p, defaults, "rho"));
      r.x0 = {get(p, defaults, "x0")};
      r.T = get(p, defaults, "T");
      return r;
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "ginzburg_landau";
    e.summary = "scalar Ginzburg-Landau equation with multiplicative noise";
    e.defaults = {{"lambda", 1.0}, {"sigma", 5.0}, {"x0", 1.0}, {"T", 1.0}};
    e.build = [defaults = e.defaults, name = e.name](const ParamMap& p) {
      reject_unknown(p, defaults, name);
      ResolvedModel r;
      r.spec = ginzburg_landau(get(p, defaults, "lambda"), get(p, defaults, "sigma"));
      r.x0 = {get(p, defaults, "x0")};
      r.T = get(p, defaults, "T");
      return r;
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "lotka_volterra_3d";
    e.summary = "three-species competitive system, one shared driving noise";
    e.defaults = {{"c1", 50.0},  {"c2", 30.0},  {"c3", 20.0},  {"a11", -55.0}, {"a22", -10.0},
                  {"a33", -15.0}, {"sigma1", 7.0}, {"sigma2", 2.0}, {"sigma3", 5.0},
                  {"x0_1", 0.5}, {"x0_2", 2.0}, {"x0_3", 1.0}, {"T", 1.0}};
    e.build = [defaults = e.defaults, name = e.name](const ParamMap& p) {
      reject_unknown(p, defaults, name);
      LotkaVolterraParams lv;
      lv.c1 = get(p, defaults, "c1");
      lv.c2 = get(p, defaults, "c2");
      lv.c3 = get(p, defaults, "c3");
      lv.a11 = get(p, defaults, "a11");
      lv.a22 = get(p, defaults, "a22");
      lv.a33 = get(p, defaults, "a33");
      lv.sigma1 = get(p, defaults, "sigma1");
      lv.sigma2 = get(p, defaults, "sigma2");
      lv.sigma3 = get(p, defaults, "sigma3");
      ResolvedModel r;
      r.spec = lotka_volterra_3d(lv);
      r.x0 = {get(p, defaults, "x0_1"), get(p, defaults, "x0_2"), get(p, defaults, "x0_3")};
      r.T = get(p, defaults, "T");
      return r;
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "sirs";
    e.summary = "SIRS epidemic model with periodic rates and transmission noise";
    e.defaults = {{"mu0", 1.0},    {"mu_amp", 0.3},  {"xi0", 2.0},   {"xi_amp", 1.0},
                  {"gamma0", 0.6}, {"gamma_amp", 0.1}, {"sigma", 1.0},
                  {"x0_1", 3.0},   {"x0_2", 0.5},    {"x0_3", 0.5},  {"T", 1.0}};
    e.build = [defaults = e.defaults, name = e.name](const ParamMap& p) {
      reject_unknown(p, defaults, name);
      const double mu0 = get(p, defaults, "mu0"), mu_amp = get(p, defaults, "mu_amp");
      const double xi0 = get(p, defaults, "xi0"), xi_amp = get(p, defaults, "xi_amp");
      const double g0 = get(p, defaults, "gamma0"), g_amp = get(p, defaults, "gamma_amp");
      const double pi = 3.14159265358979323846;
      ResolvedModel r;
      r.spec = sirs([mu0, mu_amp, pi](double t) { return mu0 + mu_amp * std::cos(pi * t); },
                    [xi0, xi_amp, pi](double t) { return xi0 + xi_amp * std::sin(pi * t); },
                    [g0, g_amp, pi](double t) { return g0 + g_amp * std::sin(pi * t); },
                    get(p, defaults, "sigma"));
      r.x0 = {get(p, defaults, "x0_1"), get(p, defaults, "x0_2"), get(p, defaults, "x0_3")};
      r.T = get(p, defaults, "T");
      return r;
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "hiv_aids";
    e.summary = "S/I/A epidemic model, noisy transmission, noiseless third stage";
    e.defaults = {{"n", 1.0},     {"mu1", 0.5}, {"mu2", 0.4}, {"xi", 0.5},  {"gamma", 0.3},
                  {"sigma", 1.0}, {"x0_1", 2.0}, {"x0_2", 1.0}, {"x0_3", 1.0}, {"T", 1.0}};
    e.build = [defaults = e.defaults, name = e.name](const ParamMap& p) {
      reject_unknown(p, defaults, name);
      HivParams hp;
      hp.n = get(p, defaults, "n");
      hp.mu1 = get(p, defaults, "mu1");
      hp.mu2 = get(p, defaults, "mu2");
      hp.xi = get(p, defaults, "xi");
      hp.gamma = get(p, defaults, "gamma");
      hp.sigma = get(p, defaults, "sigma");
      ResolvedModel r;
      r.spec = hiv_aids(hp);
      r.x0 = {get(p, defaults, "x0_1"), get(p, defaults, "x0_2"), get(p, defaults, "x0_3")};
      r.T = get(p, defaults, "T");
      return r;
    };
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace

const std::vector<CatalogEntry>& model_catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

ResolvedModel make_model(const std::string& name, const ParamMap& overrides) {
  for (const auto& entry : model_catalog()) {
    if (entry.name == name) return entry.build(overrides);
  }
  std::ostringstream msg;
  msg << "unknown model '" << name << "'; available:";
  for (const auto& entry : model_catalog()) msg << " " << entry.name;
  throw std::invalid_argument(msg.str());
}

}  // namespace pptem
