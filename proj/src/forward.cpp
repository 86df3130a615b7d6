#include "pct/forward.hpp"

#include <cmath>

namespace pct {

void ForwardModel::validate() const {
  if (mode == Mode::nearfield && !(nf > 0.0))
    throw error(errc::bad_argument, "ForwardModel: nearfield requires nf > 0");
  if (pad_y < obj_ny() || pad_x < obj_nx() || pad_y < det_y || pad_x < det_x ||
      det_y < 1 || det_x < 1)
    throw error(errc::bad_argument, "ForwardModel: inconsistent pad/detector dims");
}

ForwardModel make_model(ForwardModel::Mode mode, double nf, const GridSpec& grid,
                        const std::vector<double>& angles, int n_det, int pad_factor,
                        int det_y, int det_x) {
  ForwardModel m;
  m.mode = mode;
  m.nf = nf;
  m.k = grid.k;
  m.projector = build_projector(grid, angles, n_det);
  m.pad_y = grid.my * pad_factor;
  m.pad_x = n_det * pad_factor;
  m.det_y = det_y > 0 ? det_y : m.pad_y;
  m.det_x = det_x > 0 ? det_x : m.pad_x;
  m.validate();
  return m;
}

std::vector<cplx> otf0(const std::vector<cplx>& proj, double k) {
  std::vector<cplx> out(proj.size());
  for (std::size_t i = 0; i < proj.size(); ++i)
    out[i] = std::exp(cplx(0.0, -k) * proj[i]) - 1.0;
  return out;
}

namespace {

struct Propagation {
  FresnelKernel kernel; // nearfield only
  bool farfield = false;
};

Propagation make_propagation(const ForwardModel& m) {
  Propagation pr;
  pr.farfield = (m.mode == ForwardModel::Mode::farfield);
  if (!pr.farfield) pr.kernel = FresnelKernel::make(m.pad_y, m.pad_x, m.nf);
  return pr;
}

void propagate(const Propagation& pr, ComplexField& padded, bool backward) {
  if (pr.farfield)
    fft2_inplace(padded.data.data(), padded.ny, padded.nx, backward);
  else
    fresnel_apply_padded(padded, pr.kernel, backward);
}

} // namespace

IntensityData forward(const ForwardModel& model, const ObjectVolume& volume) {
  model.validate();
  LinearizationPoint lin = linearize(model, volume);
  IntensityData out;
  out.angles = model.projector.angles;
  out.ky = model.det_y;
  out.kx = model.det_x;
  out.data.resize(model.data_size());
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = std::norm(lin.field[i]);
  return out;
}

LinearizationPoint linearize(const ForwardModel& model, const ObjectVolume& volume) {
  model.validate();
  const double probe = (model.mode == ForwardModel::Mode::nearfield) ? 1.0 : 0.0;
  const PadSpec po = model.pad_obj(), pd = model.pad_det();
  const std::size_t lat = (std::size_t)model.obj_ny() * model.obj_nx();
  const std::size_t det = (std::size_t)model.det_y * model.det_x;
  Propagation pr = make_propagation(model);

  LinearizationPoint lin;
  std::vector<cplx> proj = radon_apply(model.projector, volume);
  lin.otf.resize(proj.size());
  for (std::size_t i = 0; i < proj.size(); ++i)
    lin.otf[i] = std::exp(cplx(0.0, -model.k) * proj[i]);

  lin.field.resize(model.data_size());
  for (std::size_t a = 0; a < model.n_angles(); ++a) {
    ComplexField o0(model.obj_ny(), model.obj_nx());
    for (std::size_t i = 0; i < lat; ++i) o0.data[i] = lin.otf[a * lat + i] - 1.0;
    ComplexField padded = zero_pad(o0, po);
    propagate(pr, padded, false);
    ComplexField scattered = truncate(padded, pd);
    for (std::size_t i = 0; i < det; ++i) lin.field[a * det + i] = probe + scattered.data[i];
  }
  return lin;
}

std::vector<double> derivative_apply(const ForwardModel& model, const LinearizationPoint& lin,
                                     const ObjectVolume& h) {
  const PadSpec po = model.pad_obj(), pd = model.pad_det();
  const std::size_t lat = (std::size_t)model.obj_ny() * model.obj_nx();
  const std::size_t det = (std::size_t)model.det_y * model.det_x;
  Propagation pr = make_propagation(model);
  const cplx mik(0.0, -model.k); // d/dN exp(-ik R_c N) = -ik * O * R_c h

  std::vector<cplx> ph = radon_apply(model.projector, h);
  std::vector<double> out(model.data_size());
  for (std::size_t a = 0; a < model.n_angles(); ++a) {
    ComplexField q(model.obj_ny(), model.obj_nx());
    for (std::size_t i = 0; i < lat; ++i)
      q.data[i] = mik * lin.otf[a * lat + i] * ph[a * lat + i];
    ComplexField padded = zero_pad(q, po);
    propagate(pr, padded, false);
    ComplexField dq = truncate(padded, pd);
    for (std::size_t i = 0; i < det; ++i)
      out[a * det + i] = 2.0 * (std::conj(lin.field[a * det + i]) * dq.data[i]).real();
  }
  return out;
}

ObjectVolume derivative_adjoint_apply(const ForwardModel& model, const LinearizationPoint& lin,
                                      const std::vector<double>& g) {
  if (g.size() != model.data_size())
    throw error(errc::bad_argument, "derivative_adjoint_apply: data shape mismatch");
  const PadSpec po = model.pad_obj(), pd = model.pad_det();
  const std::size_t lat = (std::size_t)model.obj_ny() * model.obj_nx();
  const std::size_t det = (std::size_t)model.det_y * model.det_x;
  Propagation pr = make_propagation(model);
  const cplx pik(0.0, model.k); // conj(-ik)

  std::vector<cplx> sino(model.n_angles() * lat);
  for (std::size_t a = 0; a < model.n_angles(); ++a) {
    ComplexField w(model.det_y, model.det_x);
    for (std::size_t i = 0; i < det; ++i)
      w.data[i] = lin.field[a * det + i] * g[a * det + i];
    ComplexField padded = zero_pad(w, pd);
    propagate(pr, padded, true); // conjugate kernel / inverse FFT
    ComplexField b = truncate(padded, po);
    for (std::size_t i = 0; i < lat; ++i)
      sino[a * lat + i] = 2.0 * pik * std::conj(lin.otf[a * lat + i]) * b.data[i];
  }
  return radon_adjoint(model.projector, sino);
}

IntensityData ctf_forward(const ForwardModel& model, const ObjectVolume& volume) {
  if (model.mode != ForwardModel::Mode::nearfield)
    throw error(errc::bad_argument, "ctf_forward: nearfield only");
  model.validate();
  const PadSpec po = model.pad_obj(), pd = model.pad_det();
  const std::size_t lat = (std::size_t)model.obj_ny() * model.obj_nx();
  const std::size_t det = (std::size_t)model.det_y * model.det_x;
  const double pi = 3.14159265358979323846;
  const double k = model.k;

  // sin / cos of pi*xi'^2/N_F on the padded frequency grid
  std::vector<double> sn((std::size_t)model.pad_y * model.pad_x);
  std::vector<double> cs(sn.size());
  std::size_t t = 0;
  for (int ty = 0; ty < model.pad_y; ++ty) {
    double xy = (double)freq_index(ty, model.pad_y) / model.pad_y;
    for (int tx = 0; tx < model.pad_x; ++tx, ++t) {
      double xx = (double)freq_index(tx, model.pad_x) / model.pad_x;
      double phase = std::isinf(model.nf) ? 0.0 : pi * (xx * xx + xy * xy) / model.nf;
      sn[t] = std::sin(phase);
      cs[t] = std::cos(phase);
    }
  }

  std::vector<cplx> proj = radon_apply(model.projector, volume);
  IntensityData out;
  out.angles = model.projector.angles;
  out.ky = model.det_y;
  out.kx = model.det_x;
  out.data.resize(model.data_size());
  for (std::size_t a = 0; a < model.n_angles(); ++a) {
    ComplexField pdelta(model.obj_ny(), model.obj_nx());
    ComplexField pbeta(model.obj_ny(), model.obj_nx());
    for (std::size_t i = 0; i < lat; ++i) {
      pdelta.data[i] = proj[a * lat + i].real();  // N = delta - i*beta
      pbeta.data[i] = -proj[a * lat + i].imag();
    }
    ComplexField fd = zero_pad(pdelta, po);
    ComplexField fb = zero_pad(pbeta, po);
    fft2_inplace(fd.data.data(), fd.ny, fd.nx, false);
    fft2_inplace(fb.data.data(), fb.ny, fb.nx, false);
    ComplexField ihat(model.pad_y, model.pad_x);
    for (std::size_t i = 0; i < ihat.data.size(); ++i)
      ihat.data[i] = -2.0 * k * (sn[i] * fd.data[i] + cs[i] * fb.data[i]);
    fft2_inplace(ihat.data.data(), ihat.ny, ihat.nx, true);
    ComplexField contrast = truncate(ihat, pd);
    for (std::size_t i = 0; i < det; ++i)
      out.data[a * det + i] = 1.0 + contrast.data[i].real();
  }
  return out;
}

} // namespace pct
