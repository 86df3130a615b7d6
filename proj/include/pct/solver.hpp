#pragma once

/* Iteratively regularized Gauss-Newton loop with CG inner solver.
 *
 * Each step solves the regularized normal equations of the linearized
 * problem. In the X inner product the update reads
 *   (G_X^-1 A* G_Y A + alpha_k) dN = G_X^-1 A* G_Y (I_err - F(N_k))
 *                                    + alpha_k (N_0 - N_k),
 * which is solved here in the equivalent symmetric form
 *   (A* G_Y A + alpha_k G_X) dN = A* G_Y (I_err - F(N_k))
 *                                 + alpha_k G_X (N_0 - N_k),
 * SPD in the plain real inner product, with A the constrained derivative at
 * N_k. The regularization parameter decreases geometrically,
 * alpha_k = alpha0 * r_alpha^k.
 */

#include "pct/forward.hpp"
#include "pct/regularization.hpp"

#include <functional>

namespace pct {

struct CgPolicy {
  int max_iter = 200;
  double rel_tol_base = 1e-2; // rel_tol at step k is rel_tol_base*sqrt(alpha_k/alpha0)
};

struct StopRule {
  enum class Kind { fixed, discrepancy, best };
  Kind kind = Kind::fixed;
  int fixed_k = 0;       // fixed: stop at iterate k
  double tau = 1.0;      // discrepancy: stop when residual_Y <= tau*err_norm
  double err_norm = -1;  // discrepancy: realized noise norm in the Y metric
};

struct SolverConfig {
  double alpha0 = 0.0; // must be positive; see alpha0_heuristic
  double r_alpha = 2.0 / 3.0;
  int max_newton = 30;
  int min_newton = 0; // no stop rule may fire before this many steps
  StopRule stop;
  CgPolicy cg;
  ObjectGramian gx;
  DataGramian gy;
  Constraint constraint;
  ObjectVolume initial;              // initial guess in the reduced variable
  const ObjectVolume* truth = nullptr; // enables rho_k history and best stop
};

struct IterRecord {
  int k;
  double alpha;        // alpha_k = alpha0 * r_alpha^k (used by the step leaving N_k)
  double residual_y;   // ||F(N_k) - I_err||_Y
  int cg_iters;        // inner iterations of the step leaving N_k (0 if none)
  double rho;          // ||N_k - truth|| / ||truth||, -1 if no truth
};

struct SolveResult {
  ObjectVolume volume;  // selected iterate, object space (constraint embedded)
  ObjectVolume reduced; // same iterate in the reduced variable
  std::vector<IterRecord> history;
  int selected_k = 0;
};

/* Heuristic initial regularization: nearfield ||I_err - 1||_Y^2/ref_norm^2,
   farfield (1/10)||I_err||_Y^2/ref_norm^2; ref_norm is a caller-supplied
   magnitude scale of the expected object. */
double alpha0_heuristic(const IntensityData& data, const DataGramian& gy, double ref_norm,
                        ForwardModel::Mode mode);

/* Plain CG for an SPD operator, real inner product over complex storage.
   Stops at relative residual <= rel_tol or max_iter; returns iterations
   taken. Throws on indefinite curvature. */
int cg_solve(const std::function<std::vector<cplx>(const std::vector<cplx>&)>& op,
             const std::vector<cplx>& rhs, std::vector<cplx>& x, double rel_tol, int max_iter);

bool should_stop(const StopRule& rule, int k, int min_newton, int max_newton,
                 double residual_y);

SolveResult run(const ForwardModel& model, const IntensityData& data, const SolverConfig& cfg);

void write_history_csv(const std::string& path, const std::vector<IterRecord>& history);

} // namespace pct
