#include "pct/solver.hpp"

#include <cmath>
#include <fstream>

namespace pct {

double alpha0_heuristic(const IntensityData& data, const DataGramian& gy, double ref_norm,
                        ForwardModel::Mode mode) {
  if (!(ref_norm > 0.0))
    throw error(errc::bad_argument, "alpha0_heuristic: reference norm must be positive");
  if (mode == ForwardModel::Mode::nearfield) {
    std::vector<double> contrast(data.data.size());
    for (std::size_t i = 0; i < contrast.size(); ++i) contrast[i] = data.data[i] - 1.0;
    double n = gy.norm(contrast);
    return n * n / (ref_norm * ref_norm);
  }
  double n = gy.norm(data.data);
  return 0.1 * n * n / (ref_norm * ref_norm);
}

int cg_solve(const std::function<std::vector<cplx>(const std::vector<cplx>&)>& op,
             const std::vector<cplx>& rhs, std::vector<cplx>& x, double rel_tol, int max_iter) {
  const std::size_t n = rhs.size();
  x.assign(n, cplx(0.0));
  std::vector<cplx> r = rhs;
  std::vector<cplx> p = r;
  double rr = inner_product(r, r);
  double rhs_norm = std::sqrt(rr);
  if (rhs_norm == 0.0) return 0;
  int it = 0;
  while (it < max_iter && std::sqrt(rr) > rel_tol * rhs_norm) {
    std::vector<cplx> ap = op(p);
    double pap = inner_product(p, ap);
    if (!(pap > 0.0))
      throw error(errc::numeric_failure, "cg_solve: non-positive curvature encountered");
    double gamma = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += gamma * p[i];
      r[i] -= gamma * ap[i];
    }
    double rr_new = inner_product(r, r);
    double beta = rr_new / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rr = rr_new;
    ++it;
  }
  return it;
}

bool should_stop(const StopRule& rule, int k, int min_newton, int max_newton,
                 double residual_y) {
  if (k >= max_newton) return true;
  if (k < min_newton) return false;
  switch (rule.kind) {
    case StopRule::Kind::fixed:
      return k >= rule.fixed_k;
    case StopRule::Kind::discrepancy:
      if (rule.err_norm < 0.0)
        throw error(errc::bad_argument, "discrepancy stop requires an error-level estimate");
      return residual_y <= rule.tau * rule.err_norm;
    case StopRule::Kind::best:
      return false; // runs to max_newton, selection happens afterwards
  }
  return true;
}

SolveResult run(const ForwardModel& model, const IntensityData& data, const SolverConfig& cfg) {
  model.validate();
  if (data.data.size() != model.data_size())
    throw error(errc::bad_argument, "run: data shape does not match model");
  if (!(cfg.alpha0 > 0.0)) throw error(errc::bad_argument, "run: alpha0 must be positive");
  if (!(cfg.r_alpha > 0.0 && cfg.r_alpha < 1.0))
    throw error(errc::bad_argument, "run: r_alpha must lie in (0,1)");

  const Constraint& cons = cfg.constraint;
  ObjectVolume n_red = cfg.initial;
  const ObjectVolume n0_red = cfg.initial;
  double truth_norm = cfg.truth ? norm2(cfg.truth->data) : 0.0;

  SolveResult res;
  ObjectVolume best_red = n_red;
  double best_rho = -1.0;
  int best_k = 0;

  for (int k = 0;; ++k) {
    double alpha = cfg.alpha0 * std::pow(cfg.r_alpha, k);
    ObjectVolume n_obj = cons.embed(n_red);
    LinearizationPoint lin = linearize(model, n_obj);

    std::vector<double> resid(data.data.size());
    for (std::size_t i = 0; i < resid.size(); ++i)
      resid[i] = data.data[i] - std::norm(lin.field[i]);
    double residual_y = cfg.gy.norm(resid);

    double rho = -1.0;
    if (cfg.truth && truth_norm > 0.0) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n_obj.data.size(); ++i)
        acc += std::norm(n_obj.data[i] - cfg.truth->data[i]);
      rho = std::sqrt(acc) / truth_norm;
      if (k >= cfg.min_newton && (best_rho < 0.0 || rho < best_rho)) {
        best_rho = rho;
        best_red = n_red;
        best_k = k;
      }
    }

    res.history.push_back(IterRecord{k, alpha, residual_y, 0, rho});
    if (should_stop(cfg.stop, k, cfg.min_newton, cfg.max_newton, residual_y)) {
      res.selected_k = k;
      res.reduced = n_red;
      break;
    }

    // right-hand side: A* G_Y (I - F(N_k)) + alpha * G_X (N_0 - N_k)
    ObjectVolume agr = cons.adjoint(derivative_adjoint_apply(model, lin, cfg.gy.apply(resid)));
    ObjectVolume drift(n_red.grid);
    for (std::size_t i = 0; i < drift.data.size(); ++i)
      drift.data[i] = n0_red.data[i] - n_red.data[i];
    ObjectVolume gx_drift = cfg.gx.apply(drift);
    std::vector<cplx> rhs(agr.data.size());
    for (std::size_t i = 0; i < rhs.size(); ++i)
      rhs[i] = agr.data[i] + alpha * gx_drift.data[i];

    auto op = [&](const std::vector<cplx>& v) {
      ObjectVolume h(n_red.grid);
      h.data = v;
      std::vector<double> av = derivative_apply(model, lin, cons.embed(h));
      ObjectVolume ata = cons.adjoint(derivative_adjoint_apply(model, lin, cfg.gy.apply(av)));
      ObjectVolume gxv = cfg.gx.apply(h);
      std::vector<cplx> out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = ata.data[i] + alpha * gxv.data[i];
      return out;
    };

    double rel_tol = cfg.cg.rel_tol_base * std::sqrt(alpha / cfg.alpha0);
    std::vector<cplx> delta;
    int iters = cg_solve(op, rhs, delta, rel_tol, cfg.cg.max_iter);
    res.history.back().cg_iters = iters;
    for (std::size_t i = 0; i < n_red.data.size(); ++i) n_red.data[i] += delta[i];
  }

  if (cfg.stop.kind == StopRule::Kind::best && cfg.truth) {
    res.selected_k = best_k;
    res.reduced = best_red;
  }
  res.volume = cons.embed(res.reduced);
  return res;
}

void write_history_csv(const std::string& path, const std::vector<IterRecord>& history) {
  std::ofstream os(path);
  if (!os) throw error(errc::io_failure, "write_history_csv: cannot open " + path);
  os << "k,alpha_k,data_residual,cg_iters,rho_k\n";
  for (const auto& h : history) {
    os << h.k << "," << h.alpha << "," << h.residual_y << "," << h.cg_iters << ",";
    if (h.rho >= 0.0) os << h.rho;
    os << "\n";
  }
}

} // namespace pct
