#include "chaoscoupler/models/boussinesq.hpp"

#include "chaoscoupler/models/mms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaoscoupler::models {

using Eigen::VectorXd;
using galerkin::SpMat;
using Trip = Eigen::Triplet<double>;

namespace {

constexpr double pi = std::numbers::pi;

// Ghost value = P phi_P + In phi_in (+ wall data handled by the caller), per wall.
struct Wall {
  double P = 1.0, In = 0.0;
};
struct Ghost {
  Wall left, right, bottom, top;
};
// Zero-value Dirichlet from the quadratic through the wall and two cells:
// ghost = (8 phi_w - 6 phi_P + phi_in) / 3.
constexpr Wall kDirichlet{-2.0, 1.0 / 3.0};
constexpr Wall kNeumann{1.0, 0.0};

// Adds coef * ghost of cell P, whose interior neighbour across P is `in`.
void add_ghost(std::vector<Trip>& t, int P, int in, const Wall& w, double coef) {
  t.emplace_back(P, P, coef * w.P);
  if (w.In != 0.0) t.emplace_back(P, in, coef * w.In);
}

SpMat central_x(int m, double h, Ghost gh) {
  std::vector<Trip> t;
  const double s = 0.5 / h;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int P = i + m * j;
      if (i + 1 < m) t.emplace_back(P, P + 1, s); else add_ghost(t, P, P - 1, gh.right, s);
      if (i > 0) t.emplace_back(P, P - 1, -s); else add_ghost(t, P, P + 1, gh.left, -s);
    }
  }
  SpMat A(m * m, m * m);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

SpMat central_y(int m, double h, Ghost gh) {
  std::vector<Trip> t;
  const double s = 0.5 / h;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int P = i + m * j;
      if (j + 1 < m) t.emplace_back(P, P + m, s); else add_ghost(t, P, P - m, gh.top, s);
      if (j > 0) t.emplace_back(P, P - m, -s); else add_ghost(t, P, P + m, gh.bottom, -s);
    }
  }
  SpMat A(m * m, m * m);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

SpMat laplacian(int m, double h, Ghost gh) {
  std::vector<Trip> t;
  const double s = 1.0 / (h * h);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int P = i + m * j;
      t.emplace_back(P, P, -4.0 * s);
      if (i + 1 < m) t.emplace_back(P, P + 1, s); else add_ghost(t, P, P - 1, gh.right, s);
      if (i > 0) t.emplace_back(P, P - 1, s); else add_ghost(t, P, P + 1, gh.left, s);
      if (j + 1 < m) t.emplace_back(P, P + m, s); else add_ghost(t, P, P - m, gh.top, s);
      if (j > 0) t.emplace_back(P, P - m, s); else add_ghost(t, P, P + m, gh.bottom, s);
    }
  }
  SpMat A(m * m, m * m);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

// Divergence of a cell field through interior faces using face averages.
SpMat face_divergence(int m, double h, bool x_dir) {
  std::vector<Trip> t;
  const double s = 0.5 / h;
  const int stride = x_dir ? 1 : m;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int P = i + m * j;
      const int k = x_dir ? i : j;
      if (k + 1 < m) {
        t.emplace_back(P, P + stride, s);
        t.emplace_back(P, P, s);
      }
      if (k > 0) {
        t.emplace_back(P, P - stride, -s);
        t.emplace_back(P, P, -s);
      }
    }
  }
  SpMat A(m * m, m * m);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

// Wall flux -Pr n . curl curl u per unit cell area. On a no-slip wall this is
// Pr/h^2 (V_{k+1/2} - V_{k-1/2}) along the wall, where V is the vertex average of
// the wall shear A = (9 phi_P - phi_in) / (3h) of the tangential velocity and V = 0
// at corners. The x walls act on v, the y walls on u.
SpMat wall_flux(int m, double h, double Pr, bool x_walls) {
  std::vector<Trip> t;
  const double c = 0.5 * Pr / (h * h) / (3.0 * h);
  const int normal = x_walls ? 1 : m;
  const int along = x_walls ? m : 1;
  for (int side = 0; side < 2; ++side) {
    auto cell = [&](int k) { return side == 0 ? k * along : k * along + (m - 1) * normal; };
    auto add_shear = [&](int P, int k, double w) {
      const int Q = cell(k);
      t.emplace_back(P, Q, 9.0 * w * c);
      t.emplace_back(P, side == 0 ? Q + normal : Q - normal, -w * c);
    };
    for (int k = 0; k < m; ++k) {
      const int P = cell(k);
      if (k + 1 < m) {
        add_shear(P, k, 1.0);
        add_shear(P, k + 1, 1.0);
      }
      if (k > 0) {
        add_shear(P, k - 1, -1.0);
        add_shear(P, k, -1.0);
      }
    }
  }
  SpMat A(m * m, m * m);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

void append(std::vector<Trip>& t, const SpMat& A, int r0, int c0, int skip_row = -1) {
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      if (it.row() + r0 != skip_row) t.emplace_back(it.row() + r0, it.col() + c0, it.value());
}

}  // namespace

class BoussinesqModel::MomentumProblem : public galerkin::ModuleProblem {
 public:
  explicit MomentumProblem(const BoussinesqModel& m) : m_(m) {}
  int size() const override { return 3 * m_.cells(); }
  int coupled_size() const override { return m_.cells(); }
  int param_dim() const override { return m_.params_.s1; }

  VectorXd rayleigh(const double* xi) const {
    VectorXd Ra = VectorXd::Constant(m_.cells(), m_.params_.Ra_bar);
    for (int k = 0; k < m_.params_.s1; ++k) Ra += xi[k] * m_.Ra_modes_.row(k).transpose();
    return Ra;
  }

  void residual(const VectorXd& own, const VectorXd& t, const double* xi, VectorXd& r,
                const double* xi_c) const override {
    const int n = m_.cells();
    const double Pr = m_.params_.Pr;
    const auto u = own.segment(0, n), v = own.segment(n, n), p = own.segment(2 * n, n);
    const VectorXd Ra = rayleigh(xi);
    const VectorXd b = Pr * Ra.cwiseProduct(t);
    const VectorXd Nu = u.cwiseProduct(m_.Gx0_ * u) + v.cwiseProduct(m_.Gy0_ * u);
    const VectorXd Nv = u.cwiseProduct(m_.Gx0_ * v) + v.cwiseProduct(m_.Gy0_ * v);
    r.resize(3 * n);
    r.segment(0, n) = Nu + m_.Gxp_ * p - Pr * (m_.Lap0_ * u);
    r.segment(n, n) = Nv + m_.Gyp_ * p - Pr * (m_.Lap0_ * v) - b;
    r.segment(2 * n, n) = m_.Lp_ * p + m_.Dx_ * Nu + m_.Dy_ * (Nv - b) + m_.Wx_ * v + m_.Wy_ * u;
    double p_ref = 0.0;
    if (m_.params_.mms) {
      if (xi_c == nullptr) throw std::invalid_argument("boussinesq: manufactured momentum source needs xi2");
      VectorXd fv = m_.fv_;
      for (int c = 0; c < n; ++c) {
        const int j = c / m_.params_.m;
        fv[c] += Pr * Ra[c] * mms::bq_t(m_.xc_[c], m_.hot_row(j, xi_c, 0));
      }
      r.segment(0, n) += m_.fu_;
      r.segment(n, n) += fv;
      r.segment(2 * n, n) += m_.Dx_ * m_.fu_ + m_.Dy_ * fv;
      p_ref = mms::bq_p(m_.xc_[0], m_.yc_[0]);
    }
    r[2 * n] = (p[0] - p_ref) / (m_.h_ * m_.h_);
  }

  void step_matrix(const VectorXd& own, const VectorXd&, const double*, SpMat& J) const override {
    const int n = m_.cells();
    const double Pr = m_.params_.Pr;
    const VectorXd u = own.segment(0, n), v = own.segment(n, n);
    const VectorXd ux = m_.Gx0_ * u, uy = m_.Gy0_ * u, vx = m_.Gx0_ * v, vy = m_.Gy0_ * v;
    SpMat adv = SpMat(u.asDiagonal() * m_.Gx0_) + SpMat(v.asDiagonal() * m_.Gy0_);
    SpMat Juu = adv + SpMat(ux.asDiagonal() * identity(n));
    SpMat Jvv = adv + SpMat(vy.asDiagonal() * identity(n));
    SpMat Juv = uy.asDiagonal() * identity(n);
    SpMat Jvu = vx.asDiagonal() * identity(n);
    std::vector<Trip> t;
    t.reserve(40 * n);
    const int pin = 2 * n;
    append(t, SpMat(Juu - Pr * m_.Lap0_), 0, 0);
    append(t, Juv, 0, n);
    append(t, m_.Gxp_, 0, 2 * n);
    append(t, Jvu, n, 0);
    append(t, SpMat(Jvv - Pr * m_.Lap0_), n, n);
    append(t, m_.Gyp_, n, 2 * n);
    append(t, SpMat(m_.Dx_ * Juu + m_.Dy_ * Jvu + m_.Wy_), 2 * n, 0, pin);
    append(t, SpMat(m_.Dx_ * Juv + m_.Dy_ * Jvv + m_.Wx_), 2 * n, n, pin);
    append(t, m_.Lp_, 2 * n, 2 * n, pin);
    t.emplace_back(pin, pin, 1.0 / (m_.h_ * m_.h_));
    J.resize(3 * n, 3 * n);
    J.setFromTriplets(t.begin(), t.end());
  }

 private:
  static SpMat identity(int n) {
    SpMat I(n, n);
    I.setIdentity();
    return I;
  }
  const BoussinesqModel& m_;
};

class BoussinesqModel::EnergyProblem : public galerkin::ModuleProblem {
 public:
  explicit EnergyProblem(const BoussinesqModel& m) : m_(m) {}
  int size() const override { return m_.cells(); }
  int coupled_size() const override { return 3 * m_.cells(); }
  int param_dim() const override { return m_.params_.s2; }

  void residual(const VectorXd& t, const VectorXd& own1, const double* xi, VectorXd& r,
                const double*) const override {
    const int m = m_.params_.m, n = m_.cells();
    const double h = m_.h_;
    const auto u = own1.segment(0, n), v = own1.segment(n, n);
    VectorXd gx = m_.GxT_ * t;
    const VectorXd gy = m_.GyT_ * t;
    r = -(m_.LapT_ * t);
    for (int j = 0; j < m; ++j) {
      const double Th = m_.hot_row(j, xi, 0);
      gx[m * j] -= 4.0 * Th / (3.0 * h);
      r[m * j] -= 8.0 * Th / (3.0 * h * h);
    }
    r += u.cwiseProduct(gx) + v.cwiseProduct(gy);
    if (m_.params_.mms) {
      for (int j = 0; j < m; ++j) {
        const double T0 = m_.hot_row(j, xi, 0), T1 = m_.hot_row(j, xi, 1), T2 = m_.hot_row(j, xi, 2);
        for (int i = 0; i < m; ++i) r[i + m * j] += mms::bq_fT(m_.xc_[i + m * j], m_.yc_[i + m * j], T0, T1, T2);
      }
    }
  }

  void step_matrix(const VectorXd&, const VectorXd& own1, const double*, SpMat& J) const override {
    const int n = m_.cells();
    const VectorXd u = own1.segment(0, n), v = own1.segment(n, n);
    J = SpMat(u.asDiagonal() * m_.GxT_) + SpMat(v.asDiagonal() * m_.GyT_) - m_.LapT_;
  }

 private:
  const BoussinesqModel& m_;
};

BoussinesqModel::BoussinesqModel(const BoussinesqParams& params) : params_(params) {
  const int m = params_.m;
  if (m < 3) throw std::invalid_argument("boussinesq: m must be at least 3");
  h_ = 1.0 / m;
  const int n = cells();
  field_Ra_ = randfield::build_field(2, params_.Ra_bar, params_.delta_Ra, params_.l_Ra, params_.s1);
  field_h_ = randfield::build_field(1, 0.0, params_.delta_h, params_.l_h, params_.s2);

  xc_.resize(n);
  yc_.resize(n);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      xc_[i + m * j] = (i + 0.5) * h_;
      yc_[i + m * j] = (j + 0.5) * h_;
    }
  const double c3 = std::sqrt(3.0);
  Ra_modes_.resize(params_.s1, n);
  for (int c = 0; c < n; ++c) {
    const double x[2] = {xc_[c], yc_[c]};
    for (int k = 0; k < params_.s1; ++k) Ra_modes_(k, c) = c3 * params_.delta_Ra * field_Ra_.gamma(k, x);
  }
  for (int d = 0; d < 3; ++d) {
    h_modes_[d].resize(params_.s2, m);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < params_.s2; ++k)
        h_modes_[d](k, j) = c3 * params_.delta_h * field_h_.g_deriv(field_h_.modes[k][0], (j + 0.5) * h_, d);
  }

  const Ghost dirichlet0{kDirichlet, kDirichlet, kDirichlet, kDirichlet};
  const Ghost neumann{kNeumann, kNeumann, kNeumann, kNeumann};
  const Ghost thermal{kDirichlet, kDirichlet, kNeumann, kNeumann};
  Gx0_ = central_x(m, h_, dirichlet0);
  Gy0_ = central_y(m, h_, dirichlet0);
  Lap0_ = laplacian(m, h_, dirichlet0);
  Gxp_ = central_x(m, h_, neumann);
  Gyp_ = central_y(m, h_, neumann);
  Lp_ = laplacian(m, h_, neumann);
  Dx_ = face_divergence(m, h_, true);
  Dy_ = face_divergence(m, h_, false);
  Wx_ = wall_flux(m, h_, params_.Pr, true);
  Wy_ = wall_flux(m, h_, params_.Pr, false);
  GxT_ = central_x(m, h_, thermal);
  GyT_ = central_y(m, h_, thermal);
  LapT_ = laplacian(m, h_, thermal);

  if (params_.mms) {
    fu_.resize(n);
    fv_.resize(n);
    for (int c = 0; c < n; ++c) {
      fu_[c] = mms::bq_fu(xc_[c], yc_[c], params_.Pr);
      fv_[c] = mms::bq_fv(xc_[c], yc_[c], params_.Pr);
    }
  }

  if (params_.identity_gramian) {
    gram_[0] = Gramian::identity(3 * n);
    gram_[1] = Gramian::identity(n);
  } else {
    gram_[0] = Gramian::diagonal(VectorXd::Constant(3 * n, h_ * h_));
    gram_[1] = Gramian::diagonal(VectorXd::Constant(n, h_ * h_));
  }
  mom_ = std::make_unique<MomentumProblem>(*this);
  energy_ = std::make_unique<EnergyProblem>(*this);
}

BoussinesqModel::~BoussinesqModel() = default;

const galerkin::ModuleProblem& BoussinesqModel::module(int i) const {
  if (i == 1) return *mom_;
  if (i == 2) return *energy_;
  throw std::out_of_range("boussinesq: module index");
}

const Gramian& BoussinesqModel::gramian(int i) const {
  if (i != 1 && i != 2) throw std::out_of_range("boussinesq: module index");
  return gram_[i - 1];
}

double BoussinesqModel::hot_row(int j, const double* xi2, int derivative) const {
  double hv[3] = {0.0, 0.0, 0.0};
  for (int d = 0; d <= derivative; ++d)
    for (int k = 0; k < params_.s2; ++k) hv[d] += h_modes_[d](k, j) * xi2[k];
  return compose_hot_wall((j + 0.5) * h_, hv, derivative);
}

double BoussinesqModel::hot_wall(double x2, const double* xi2, int derivative) const {
  double hv[3] = {0.0, 0.0, 0.0};
  const double c3 = std::sqrt(3.0);
  for (int d = 0; d <= derivative; ++d)
    for (int k = 0; k < params_.s2; ++k)
      hv[d] += c3 * params_.delta_h * field_h_.g_deriv(field_h_.modes[k][0], x2, d) * xi2[k];
  return compose_hot_wall(x2, hv, derivative);
}

// T_h = Th_bar + h sin^2(pi x2) and its derivatives, given h and its derivatives.
double BoussinesqModel::compose_hot_wall(double x2, const double* hv, int derivative) const {
  const double s2 = std::sin(pi * x2) * std::sin(pi * x2);
  const double s2p = pi * std::sin(2.0 * pi * x2);
  const double s2pp = 2.0 * pi * pi * std::cos(2.0 * pi * x2);
  switch (derivative) {
    case 0: return params_.Th_bar + hv[0] * s2;
    case 1: return hv[1] * s2 + hv[0] * s2p;
    case 2: return hv[2] * s2 + 2.0 * hv[1] * s2p + hv[0] * s2pp;
    default: throw std::invalid_argument("hot_wall: derivative order must be 0, 1 or 2");
  }
}

double BoussinesqModel::kinetic_energy(const VectorXd& u1) const {
  const int n = cells();
  return 0.5 * (u1.segment(0, n).squaredNorm() + u1.segment(n, n).squaredNorm()) * h_ * h_;
}

double BoussinesqModel::thermal_energy(const VectorXd& t) const { return t.sum() * h_ * h_; }

double BoussinesqModel::mms_error(const VectorXd& u1, const VectorXd& t, const double* xi2) const {
  const int m = params_.m, n = cells();
  double num = 0.0, den = 0.0;
  for (int c = 0; c < n; ++c) {
    const double x = xc_[c], y = yc_[c];
    const double ex[4] = {mms::bq_u(x, y), mms::bq_v(x, y), mms::bq_p(x, y), mms::bq_t(x, hot_row(c / m, xi2, 0))};
    const double ap[4] = {u1[c], u1[n + c], u1[2 * n + c], t[c]};
    for (int k = 0; k < 4; ++k) {
      num += (ex[k] - ap[k]) * (ex[k] - ap[k]);
      den += ex[k] * ex[k];
    }
  }
  return std::sqrt(num / den);
}

}  // namespace chaoscoupler::models
