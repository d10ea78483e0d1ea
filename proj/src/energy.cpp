#include "mcsv/energy.hpp"

#include <algorithm>
#include <cmath>

#include "mcsv/error.hpp"

namespace mcsv {

namespace {

void check_grid(const RealField& u, const BackgroundData& bg) {
  if (u.empty() || u.grid()->n() != bg.grid->n() || u.grid()->offset() != bg.grid->offset()) {
    throw Error(ErrorKind::GridMismatch, "field and background live on different grids");
  }
}

}  // namespace

ResidualReport make_residual_report(const RealField& r, const std::vector<std::uint8_t>& keep) {
  ResidualReport rep;
  rep.global_l2 = l2_norm(r);
  rep.masked_l2 = masked_l2(r, keep);
  rep.linf_masked = masked_linf(r, keep);
  rep.mean_residual = mean(r);
  return rep;
}

struct Functional::State {
  RealField w;
  RealField a1, a2;   // grad w
  RealField grad_sq;  // |grad w|^2
  RealField lap_u;
  RealField F1, F2, F3;
};

Functional::Functional(const BackgroundData& bg, const ModelParams& params)
    : Functional(bg, params, params.eps) {}

Functional::Functional(const BackgroundData& bg, const ModelParams& params, double eps)
    : bg_(&bg), profile_(params.profile.get()), lambda_(params.lambda), eps_(eps), s_(params.s) {
  if (!profile_) throw Error(ErrorKind::Parameter, "no profile selected");
  if (!(lambda_ > 0.0)) throw Error(ErrorKind::Parameter, "lambda must be positive");
  if (!(eps_ >= 0.0)) throw Error(ErrorKind::Parameter, "eps must be non-negative");
}

Functional::State Functional::state(const RealField& u) const {
  check_grid(u, *bg_);
  require_finite(u, "energy argument");
  State st;
  st.w = bg_->sigma + u;
  Gradient gu = mcsv::gradient(u);
  st.a1 = bg_->sigma_d1 + gu.d1;
  st.a2 = bg_->sigma_d2 + gu.d2;
  st.grad_sq = st.a1 * st.a1 + st.a2 * st.a2;
  st.lap_u = laplacian(u);
  Composites c = composites(*profile_, st.w);
  st.F1 = std::move(c.F1);
  st.F2 = std::move(c.F2);
  st.F3 = std::move(c.F3);
  return st;
}

EnergyBreakdown Functional::energy(const RealField& u) const {
  const State st = state(u);
  EnergyBreakdown e;
  e.biharmonic = 0.5 * eps_ * eps_ * inner(st.lap_u, st.lap_u);
  e.dirichlet = -0.5 * inner(u, st.lap_u);
  e.mixed = eps_ > 0.0 ? eps_ * lambda_ * inner(st.F2, st.grad_sq) : 0.0;
  const RealField gap = st.F1 - s_;
  e.potential = 0.5 * lambda_ * lambda_ * inner(gap, gap);
  e.linear = -bg_->flux() * integrate(u);
  e.total = e.biharmonic + e.dirichlet + e.mixed + e.potential + e.linear;
  return e;
}

RealField Functional::gradient(const RealField& u) const {
  const State st = state(u);
  RealField g = -st.lap_u;
  if (eps_ > 0.0) {
    g.axpy(eps_ * eps_, laplacian(st.lap_u));
    const double el = eps_ * lambda_;
    g.axpy(el, st.F3 * st.grad_sq);
    g.axpy(-2.0 * el, divergence(st.F2 * st.a1, st.F2 * st.a2));
  }
  g.axpy(lambda_ * lambda_, st.F2 * (st.F1 - s_));
  g -= bg_->flux();
  return g;
}

Linearization Functional::linearize(const RealField& u) const {
  const State st = state(u);
  Linearization lin;
  lin.eps_ = eps_;
  lin.eps_lambda_ = eps_ * lambda_;
  lin.a1_ = st.a1;
  lin.a2_ = st.a2;
  lin.f2_ = st.F2;
  lin.f3_ = st.F3;
  const RealField F4 = st.w.map([&](double x) { return profile_->F4(x); });
  lin.zeroth_ = lambda_ * lambda_ * (st.F3 * (st.F1 - s_) + st.F2 * st.F2);
  if (eps_ > 0.0) lin.zeroth_.axpy(eps_ * lambda_, F4 * st.grad_sq);
  return lin;
}

RealField Linearization::apply(const RealField& phi) const {
  const RealField lap_phi = laplacian(phi);
  RealField out = -lap_phi;
  out += zeroth_ * phi;
  if (eps_ > 0.0) {
    out.axpy(eps_ * eps_, laplacian(lap_phi));
    const Gradient gp = mcsv::gradient(phi);
    // 2 F3 grad w . grad phi - 2 div(F3 phi grad w + F2 grad phi)
    out.axpy(2.0 * eps_lambda_, f3_ * (a1_ * gp.d1 + a2_ * gp.d2));
    const RealField f3phi = f3_ * phi;
    out.axpy(-2.0 * eps_lambda_,
             divergence(f3phi * a1_ + f2_ * gp.d1, f3phi * a2_ + f2_ * gp.d2));
  }
  return out;
}

RealField Functional::hessian_apply(const RealField& u, const RealField& phi) const {
  return linearize(u).apply(phi);
}

double Functional::residual_scale(const RealField& u) const {
  const State st = state(u);
  double scale = l2_norm(st.lap_u) + bg_->flux();
  scale += lambda_ * lambda_ * l2_norm(st.F2 * (st.F1 - s_));
  if (eps_ > 0.0) {
    const double el = eps_ * lambda_;
    scale += eps_ * eps_ * l2_norm(laplacian(st.lap_u));
    scale += el * l2_norm(st.F3 * st.grad_sq);
    scale += 2.0 * el * l2_norm(divergence(st.F2 * st.a1, st.F2 * st.a2));
  }
  return scale;
}

EnergyBreakdown eval_I_eps(const RealField& u, const BackgroundData& bg,
                           const ModelParams& params) {
  return Functional(bg, params).energy(u);
}

RealField grad_I_eps(const RealField& u, const BackgroundData& bg, const ModelParams& params) {
  return Functional(bg, params).gradient(u);
}

ResidualReport residual_fourth(const RealField& u, const BackgroundData& bg,
                               const ModelParams& params) {
  return make_residual_report(grad_I_eps(u, bg, params), bg.keep);
}

double eval_I0(const RealField& u, const BackgroundData& bg, const ModelParams& params) {
  return Functional(bg, params, 0.0).energy(u).total;
}

RealField grad_I0(const RealField& u, const BackgroundData& bg, const ModelParams& params) {
  return Functional(bg, params, 0.0).gradient(u);
}

ResidualReport residual_limit(const RealField& u, const BackgroundData& bg,
                              const ModelParams& params) {
  return make_residual_report(grad_I0(u, bg, params), bg.keep);
}

RealField recover_v(const RealField& u, const BackgroundData& bg, const ModelParams& params) {
  check_grid(u, bg);
  const double c = params.eps / params.lambda;
  RealField v = -c * laplacian(u);
  v -= c * bg.flux();
  v += (bg.sigma + u).map([&](double x) { return params.profile->F1(x); });
  require_finite(v, "recovered v");
  return v;
}

SystemResiduals residual_system(const RealField& u, const RealField& v,
                                const BackgroundData& bg, const ModelParams& params) {
  check_grid(u, bg);
  check_grid(v, bg);
  const double eps = params.eps;
  const double lam = params.lambda;
  const double A = bg.flux();
  const RealField w = bg.sigma + u;
  const RealField F1 = w.map([&](double x) { return params.profile->F1(x); });
  const RealField F2 = w.map([&](double x) { return params.profile->F2(x); });

  const RealField lap_u = laplacian(u);
  const RealField lap_v = laplacian(v);
  const RealField coupling = (lam / eps) * (v - F1);
  RealField r1 = -lap_u - coupling;
  r1 -= A;

  const RealField t_pot = (lam / eps) * (F2 * (params.s - v));
  const RealField t_relax = (1.0 / (eps * eps)) * (v - F1);
  const RealField r2 = -lap_v - t_pot + t_relax;

  RealField r2b = -lap_v + (1.0 / (eps * eps)) * ((1.0 + eps * lam * F2) * v);
  r2b -= (1.0 / (eps * eps)) * (F1 + (eps * lam * params.s) * F2);

  SystemResiduals out;
  out.first = make_residual_report(r1, bg.keep);
  out.second = make_residual_report(r2, bg.keep);
  out.second_rearranged = make_residual_report(r2b, bg.keep);
  out.first_scale = std::max({masked_l2(lap_u, bg.keep), masked_l2(coupling, bg.keep), A});
  out.second_scale = std::max({masked_l2(lap_v, bg.keep), masked_l2(t_pot, bg.keep),
                               masked_l2(t_relax, bg.keep)});
  return out;
}

IdentityReport identity_checks(const RealField& u, const BackgroundData& bg,
                               const ModelParams& params) {
  check_grid(u, bg);
  const Profile& p = *params.profile;
  const double A = bg.flux();
  const RealField w = bg.sigma + u;
  const Composites c = composites(p, w);
  const Gradient gu = gradient(u);
  const RealField a1 = bg.sigma_d1 + gu.d1;
  const RealField a2 = bg.sigma_d2 + gu.d2;
  const RealField grad_sq = a1 * a1 + a2 * a2;
  // Away from the vortices Lap sigma = A; the delta parts are multiplied by
  // F2, which vanishes at the vortex points.
  const RealField lap_w = laplacian(u) + A;

  IdentityReport rep;
  const RealField lhs = laplacian(c.F1);
  const RealField t1 = c.F3 * grad_sq;
  const RealField t2 = c.F2 * lap_w;
  const double denom = masked_l2(t1, bg.keep) + masked_l2(t2, bg.keep);
  const RealField mismatch = lhs - t1 - t2;
  rep.chain_rule = denom > 0.0 ? masked_l2(mismatch, bg.keep) / denom
                               : masked_l2(mismatch, bg.keep);

  const RealField dot = c.F2 * (a1 * gu.d1 + a2 * gu.d2);
  rep.int_by_parts_lhs = inner(t1, u) + 2.0 * integrate(dot);
  rep.int_by_parts_rhs = integrate(dot) - inner(t2, u);
  const double ibp_scale = std::max({std::abs(inner(t1, u)), std::abs(integrate(dot)),
                                     std::abs(inner(t2, u)), 1e-300});
  rep.int_by_parts = std::abs(rep.int_by_parts_lhs - rep.int_by_parts_rhs) / ibp_scale;

  rep.flux = std::abs(inner(c.F2, c.F1 - params.s) - A / (params.lambda * params.lambda));
  return rep;
}

}  // namespace mcsv
