// pct: batch front end for phantom generation, data simulation,
// regularized Newton reconstruction and error metrics.
//
// Exit codes: 0 success, 2 usage/validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include "pct/baseline.hpp"
#include "pct/simulate.hpp"
#include "pct/solver.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

using namespace pct;
using json = nlohmann::json;

namespace {

const double pi = 3.14159265358979323846;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GridSpec grid_from_dims(const std::vector<uint64_t>& dims) {
  if (dims.size() != 3) throw UsageError("volume must be 3-dimensional (MY,MX,MZ)");
  GridSpec g{(int)dims[1], (int)dims[0], (int)dims[2]};
  g.validate();
  return g;
}

ObjectVolume load_volume(const std::string& path) {
  NdArray arr = read_array(path);
  if (arr.dtype != Dtype::complex128) throw UsageError("expected a complex volume: " + path);
  GridSpec g = grid_from_dims(arr.dims);
  ObjectVolume v(g);
  v.data = std::move(arr.c128);
  return v;
}

void save_volume(const std::string& path, const ObjectVolume& v) {
  NdArray arr;
  arr.dtype = Dtype::complex128;
  arr.dims = {(uint64_t)v.grid.my, (uint64_t)v.grid.mx, (uint64_t)v.grid.mz};
  arr.c128 = v.data;
  write_array(path, arr);
}

std::vector<int> parse_grid(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t c = s.find(',', pos);
    std::string tok = s.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
    try {
      out.push_back(std::stoi(tok));
    } catch (...) {
      throw UsageError("bad grid spec: " + s);
    }
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  if (out.size() != 3) throw UsageError("grid must be MX,MY,MZ");
  return out;
}

// splits "name:arg" into (name, arg); arg empty when there is no colon
std::pair<std::string, std::string> split_colon(const std::string& s) {
  std::size_t c = s.find(':');
  if (c == std::string::npos) return {s, ""};
  return {s.substr(0, c), s.substr(c + 1)};
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("trailing");
    return v;
  } catch (...) {
    throw UsageError(std::string("bad numeric value for ") + what + ": " + s);
  }
}

void maybe_dump_config(const CLI::App& sub, bool dump) {
  if (!dump) return;
  std::cout << sub.config_to_str(true, false);
}

void write_graymap(const std::string& path, const ObjectVolume& v, bool imag_part) {
  // central lateral slice (middle y): mx rows by mz columns
  int y = v.grid.my / 2;
  std::vector<double> img((std::size_t)v.grid.mx * v.grid.mz);
  for (int ix = 0; ix < v.grid.mx; ++ix)
    for (int iz = 0; iz < v.grid.mz; ++iz) {
      cplx x = v.at(y, ix, iz);
      img[(std::size_t)ix * v.grid.mz + iz] = imag_part ? x.imag() : x.real();
    }
  emit_grayscale(path, v.grid.mx, v.grid.mz, img.data());
}

int cmd_phantom(CLI::App& sub, const std::string& kind, const std::string& grid_s,
                uint64_t seed, double magnitude, double cbd, int n_ell,
                const std::string& out, bool dump) {
  maybe_dump_config(sub, dump);
  auto dims = parse_grid(grid_s);
  GridSpec g{dims[0], dims[1], dims[2]};
  g.validate();
  ObjectVolume v(g);
  if (kind == "ellipsoids") {
    PhantomSpec spec;
    spec.seed = seed;
    spec.n_ellipsoids = n_ell;
    spec.c_beta_delta = cbd;
    spec.target_magnitude = magnitude;
    v = phantom_ellipsoids(g, spec);
  } else {
    RefShape shape;
    if (kind == "rectangle")
      shape = RefShape::rectangle;
    else if (kind == "sphere")
      shape = RefShape::sphere;
    else if (kind == "bullet")
      shape = RefShape::bullet;
    else if (kind == "exp-ramp")
      shape = RefShape::exp_ramp;
    else
      throw UsageError("unknown phantom kind: " + kind);
    v = phantom_reference(g, shape, magnitude);
  }
  save_volume(out, v);
  std::cout << "phantom " << kind << " magnitude " << magnitude_norm(v) << " -> " << out
            << "\n";
  return 0;
}

int cmd_simulate(CLI::App& sub, const std::string& object_path, const std::string& mode_s,
                 double nf, int n_angles, const std::string& angles_file, double theta_span,
                 double theta_max, int pad, int det_y, int det_x, const std::string& noise,
                 double beamstop, uint64_t seed, const std::string& out, bool dump) {
  maybe_dump_config(sub, dump);
  ObjectVolume v = load_volume(object_path);
  ForwardModel::Mode mode;
  if (mode_s == "nearfield")
    mode = ForwardModel::Mode::nearfield;
  else if (mode_s == "farfield")
    mode = ForwardModel::Mode::farfield;
  else
    throw UsageError("mode must be nearfield or farfield");
  if (mode == ForwardModel::Mode::nearfield && !(nf > 0.0))
    throw UsageError("nearfield simulation requires --nf > 0");

  std::vector<double> angles;
  if (!angles_file.empty()) {
    std::ifstream is(angles_file);
    if (!is) throw UsageError("cannot open angle list: " + angles_file);
    double a;
    while (is >> a) angles.push_back(a);
    if (angles.empty()) throw UsageError("empty angle list: " + angles_file);
  } else {
    if (n_angles < 1) throw UsageError("--angles must be >= 1");
    double span = theta_span * pi / 180.0;
    angles.resize(n_angles);
    for (int i = 0; i < n_angles; ++i) angles[i] = i * span / n_angles;
  }

  ForwardModel m = make_model(mode, mode == ForwardModel::Mode::farfield ? nf_infinity : nf,
                              v.grid, angles, v.grid.mx, pad, det_y, det_x);
  IntensityData data = forward(m, v);

  auto [noise_kind, noise_arg] = split_colon(noise);
  double err_norm = 0.0, i0 = 0.0;
  if (noise_kind == "none") {
  } else if (noise_kind == "gaussian") {
    NoisyData nd = add_gaussian_noise(data, parse_double(noise_arg, "--noise"), seed);
    data = nd.data;
    err_norm = nd.err_norm2;
  } else if (noise_kind == "poisson") {
    NoisyData nd = add_poisson_noise(data, parse_double(noise_arg, "--noise"), 0.0, seed);
    i0 = nd.i0;
    err_norm = nd.err_norm2;
    // store on the intensity scale so downstream stays unit-consistent
    data = nd.data;
    for (auto& x : data.data) x /= i0;
  } else {
    throw UsageError("noise must be none, gaussian:EPS or poisson:EPS");
  }

  NdArray arr;
  arr.dtype = Dtype::real64;
  arr.dims = {(uint64_t)angles.size(), (uint64_t)m.det_y, (uint64_t)m.det_x};
  arr.f64 = data.data;
  write_array(out, arr);

  bool wedge = theta_max * pi / 180.0 < angles.back() + 1e-12;
  if (wedge || beamstop > 0.0) {
    std::vector<double> w =
        make_masks(angles, m.det_y, m.det_x, 0.0, theta_max * pi / 180.0, beamstop);
    NdArray warr;
    warr.dtype = Dtype::real64;
    warr.dims = arr.dims;
    warr.f64 = std::move(w);
    write_array(out + ".weights", warr);
  }

  json side;
  side["mode"] = mode_s;
  side["nf"] = mode == ForwardModel::Mode::farfield ? 0.0 : nf;
  side["angles"] = angles;
  side["theta_span_deg"] = theta_span;
  side["theta_max_deg"] = theta_max;
  side["pad"] = pad;
  side["det"] = {m.det_y, m.det_x};
  side["grid"] = {v.grid.my, v.grid.mx, v.grid.mz};
  side["noise"] = noise;
  side["seed"] = seed;
  side["err_norm"] = err_norm;
  side["i0"] = i0;
  std::ofstream os(out + ".json");
  os << side.dump(2) << "\n";
  std::cout << "simulate " << mode_s << " angles " << angles.size() << " err " << err_norm
            << " -> " << out << "\n";
  return 0;
}

int cmd_reconstruct(CLI::App& sub, const std::string& data_path, const std::string& reg,
                    const std::string& alpha0_s, double ralpha, int max_newton,
                    int min_newton, const std::string& stop_s, const std::string& cons_s,
                    const std::string& init_s, const std::string& out,
                    const std::string& log_csv, const std::string& graymap, bool dump) {
  maybe_dump_config(sub, dump);
  NdArray arr = read_array(data_path);
  if (arr.dtype != Dtype::real64 || arr.dims.size() != 3)
    throw UsageError("data must be a real (angles, ky, kx) array: " + data_path);
  std::ifstream sis(data_path + ".json");
  if (!sis) throw UsageError("missing sidecar: " + data_path + ".json");
  json side = json::parse(sis, nullptr, false);
  if (side.is_discarded()) throw UsageError("unreadable sidecar: " + data_path + ".json");

  std::string mode_s = side["mode"];
  ForwardModel::Mode mode =
      mode_s == "farfield" ? ForwardModel::Mode::farfield : ForwardModel::Mode::nearfield;
  double nf = side["nf"];
  std::vector<double> angles = side["angles"].get<std::vector<double>>();
  std::vector<int> gd = side["grid"].get<std::vector<int>>();
  std::vector<int> det = side["det"].get<std::vector<int>>();
  GridSpec g{gd[1], gd[0], gd[2]};
  g.validate();
  int pad = side["pad"];

  ForwardModel m = make_model(mode, mode == ForwardModel::Mode::farfield ? nf_infinity : nf,
                              g, angles, g.mx, pad, det[0], det[1]);
  IntensityData data;
  data.angles = angles;
  data.ky = det[0];
  data.kx = det[1];
  data.data = std::move(arr.f64);
  if (data.data.size() != m.data_size()) throw UsageError("data shape mismatch with sidecar");

  SolverConfig cfg;
  cfg.r_alpha = ralpha;
  cfg.max_newton = max_newton;
  cfg.min_newton = min_newton;

  auto [reg_kind, reg_arg] = split_colon(reg);
  if (reg_kind == "l2") {
  } else if (reg_kind == "sobolev") {
    cfg.gx.s = parse_double(reg_arg, "--reg");
  } else {
    throw UsageError("reg must be l2 or sobolev:S");
  }

  std::ifstream wis(data_path + ".weights", std::ios::binary);
  if (wis.good()) {
    wis.close();
    NdArray w = read_array(data_path + ".weights");
    if (w.f64.size() != data.data.size()) throw UsageError("weights shape mismatch");
    cfg.gy.mask = std::move(w.f64);
  }

  auto [cons_kind, cons_arg] = split_colon(cons_s);
  if (cons_kind == "none") {
  } else if (cons_kind == "purephase") {
    cfg.constraint = Constraint::pure_phase();
  } else if (cons_kind == "singlematerial") {
    std::size_t c = cons_arg.find(',');
    if (c == std::string::npos) throw UsageError("singlematerial needs RE,IM");
    cfg.constraint = Constraint::material(cplx(parse_double(cons_arg.substr(0, c), "--constraint"),
                                               parse_double(cons_arg.substr(c + 1), "--constraint")));
  } else if (cons_kind == "support") {
    ObjectVolume sup = load_volume(cons_arg);
    if (sup.grid.voxels() != g.voxels()) throw UsageError("support mask shape mismatch");
    cfg.constraint.support.resize(sup.data.size());
    for (std::size_t i = 0; i < sup.data.size(); ++i)
      cfg.constraint.support[i] = sup.data[i] == cplx(0.0) ? 0.0 : 1.0;
  } else {
    throw UsageError("constraint must be none, purephase, singlematerial:RE,IM or support:FILE");
  }

  if (init_s == "zero")
    cfg.initial = ObjectVolume(g);
  else {
    cfg.initial = load_volume(init_s);
    if (cfg.initial.grid.voxels() != g.voxels()) throw UsageError("init shape mismatch");
  }

  ObjectVolume truth(g);
  bool have_truth = false;
  auto [stop_kind, stop_arg] = split_colon(stop_s);
  if (stop_kind == "fixed") {
    cfg.stop.kind = StopRule::Kind::fixed;
    cfg.stop.fixed_k = (int)parse_double(stop_arg, "--stop");
  } else if (stop_kind == "discrepancy") {
    cfg.stop.kind = StopRule::Kind::discrepancy;
    cfg.stop.tau = parse_double(stop_arg, "--stop");
    double err = side.value("err_norm", -1.0);
    if (!(err >= 0.0) || !side.contains("err_norm"))
      throw UsageError("discrepancy stop needs a simulated error estimate in the sidecar");
    cfg.stop.err_norm = err;
  } else if (stop_kind == "best") {
    cfg.stop.kind = StopRule::Kind::best;
    truth = load_volume(stop_arg);
    if (truth.grid.voxels() != g.voxels()) throw UsageError("truth shape mismatch");
    have_truth = true;
    cfg.truth = &truth;
  } else {
    throw UsageError("stop must be fixed:K, discrepancy:TAU or best:TRUTHFILE");
  }

  if (alpha0_s == "auto") {
    double ref = have_truth ? norm2(truth.data) : norm2(cfg.initial.data);
    if (!(ref > 0.0))
      throw UsageError("--alpha0 auto needs a nonzero --init or a truth file for the scale");
    cfg.alpha0 = alpha0_heuristic(data, cfg.gy, ref, mode);
  } else {
    cfg.alpha0 = parse_double(alpha0_s, "--alpha0");
  }

  SolveResult res = run(m, data, cfg);
  save_volume(out, res.volume);
  if (!log_csv.empty()) write_history_csv(log_csv, res.history);
  if (!graymap.empty()) {
    write_graymap(graymap + "_delta.pgm", res.volume, false);
    write_graymap(graymap + "_beta.pgm", res.volume, true);
  }
  std::cout << "reconstruct selected k=" << res.selected_k << " residual "
            << res.history.back().residual_y << " -> " << out << "\n";
  return 0;
}

int cmd_metrics(CLI::App& sub, const std::string& recon_path, const std::string& truth_path,
                const std::string& ref_path, bool dump) {
  maybe_dump_config(sub, dump);
  ObjectVolume rec = load_volume(recon_path);
  ObjectVolume truth = load_volume(truth_path);
  if (rec.data.size() != truth.data.size()) throw UsageError("metrics: shape mismatch");
  double num = 0.0;
  for (std::size_t i = 0; i < rec.data.size(); ++i) num += std::norm(rec.data[i] - truth.data[i]);
  double den = norm2(truth.data);
  if (den == 0.0) throw UsageError("metrics: zero truth volume");
  std::cout << "rho " << std::sqrt(num) / den << "\n";
  if (!ref_path.empty()) {
    ObjectVolume ref = load_volume(ref_path);
    if (ref.data.size() != truth.data.size()) throw UsageError("metrics: reference shape mismatch");
    double dref = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i)
      dref += std::norm(truth.data[i] - ref.data[i]);
    if (dref == 0.0) throw UsageError("metrics: truth equals reference");
    std::cout << "rho_ref " << std::sqrt(num / dref) << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"propagation-based phase contrast tomography toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file; flags override");
  int threads = 1;
  app.add_option("--threads", threads,
                 "worker thread budget (results are independent of its value)");

  // phantom
  auto* ph = app.add_subcommand("phantom", "generate a phantom volume");
  std::string ph_kind = "ellipsoids", ph_grid, ph_out;
  uint64_t ph_seed = 0;
  double ph_mag = pi, ph_cbd = 0.0;
  int ph_nell = 8;
  bool ph_dump = false;
  ph->add_option("--kind", ph_kind, "ellipsoids|rectangle|sphere|bullet|exp-ramp");
  ph->add_option("--grid", ph_grid, "MX,MY,MZ")->required();
  ph->add_option("--seed", ph_seed);
  ph->add_option("--magnitude", ph_mag, "target k*L*max|N|");
  ph->add_option("--cbd", ph_cbd, "beta/delta ratio");
  ph->add_option("--ellipsoids", ph_nell, "ellipsoid count");
  ph->add_option("--out", ph_out)->required();
  ph->add_flag("--dump-config", ph_dump);

  // simulate
  auto* si = app.add_subcommand("simulate", "forward-simulate intensity data");
  std::string si_obj, si_mode = "nearfield", si_noise = "none", si_out, si_angfile;
  double si_nf = 0.0, si_span = 180.0, si_tmax = 180.0, si_beam = 0.0;
  int si_angles = 0, si_pad = 2, si_dety = 0, si_detx = 0;
  uint64_t si_seed = 0;
  bool si_dump = false;
  si->add_option("--object", si_obj)->required();
  si->add_option("--mode", si_mode, "nearfield|farfield");
  si->add_option("--nf", si_nf, "pixel-referenced Fresnel number");
  si->add_option("--angles", si_angles, "equispaced angle count");
  si->add_option("--angles-file", si_angfile, "explicit angle list (radians, one per line)");
  si->add_option("--theta-span", si_span, "generation span in degrees (default 180)");
  si->add_option("--theta-max", si_tmax, "kept wedge [0, theta-max) in degrees; rest masked");
  si->add_option("--pad", si_pad, "padding factor");
  si->add_option("--det-y", si_dety, "detector rows (default: padded)");
  si->add_option("--det-x", si_detx, "detector columns (default: padded)");
  si->add_option("--noise", si_noise, "none|gaussian:EPS|poisson:EPS");
  si->add_option("--beamstop", si_beam, "masked frequency radius (farfield)");
  si->add_option("--seed", si_seed);
  si->add_option("--out", si_out)->required();
  si->add_flag("--dump-config", si_dump);

  // reconstruct
  auto* re = app.add_subcommand("reconstruct", "regularized Newton reconstruction");
  std::string re_data, re_reg = "l2", re_alpha0 = "auto", re_stop = "fixed:10";
  std::string re_cons = "none", re_init = "zero", re_out, re_log, re_gray;
  double re_ralpha = 2.0 / 3.0;
  int re_maxn = 30, re_minn = 0;
  bool re_dump = false;
  re->add_option("--data", re_data)->required();
  re->add_option("--reg", re_reg, "l2|sobolev:S");
  re->add_option("--alpha0", re_alpha0, "auto|VALUE");
  re->add_option("--ralpha", re_ralpha, "geometric alpha decay in (0,1)");
  re->add_option("--max-newton", re_maxn);
  re->add_option("--min-newton", re_minn);
  re->add_option("--stop", re_stop, "fixed:K|discrepancy:TAU|best:TRUTHFILE");
  re->add_option("--constraint", re_cons, "none|purephase|singlematerial:RE,IM|support:FILE");
  re->add_option("--init", re_init, "zero|FILE");
  re->add_option("--out", re_out)->required();
  re->add_option("--log", re_log, "CSV iteration log");
  re->add_option("--graymap", re_gray, "prefix for central-slice graymaps");
  re->add_flag("--dump-config", re_dump);

  // metrics
  auto* me = app.add_subcommand("metrics", "relative reconstruction error");
  std::string me_rec, me_truth, me_ref;
  bool me_dump = false;
  me->add_option("--recon", me_rec)->required();
  me->add_option("--truth", me_truth)->required();
  me->add_option("--subtract-reference", me_ref);
  me->add_flag("--dump-config", me_dump);

  try {
    app.parse(argc, argv);
    if (ph->parsed())
      return cmd_phantom(*ph, ph_kind, ph_grid, ph_seed, ph_mag, ph_cbd, ph_nell, ph_out,
                         ph_dump);
    if (si->parsed())
      return cmd_simulate(*si, si_obj, si_mode, si_nf, si_angles, si_angfile, si_span,
                          si_tmax, si_pad, si_dety, si_detx, si_noise, si_beam, si_seed,
                          si_out, si_dump);
    if (re->parsed())
      return cmd_reconstruct(*re, re_data, re_reg, re_alpha0, re_ralpha, re_maxn, re_minn,
                             re_stop, re_cons, re_init, re_out, re_log, re_gray, re_dump);
    if (me->parsed()) return cmd_metrics(*me, me_rec, me_truth, me_ref, me_dump);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::numeric_failure ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
