#include "chaoscoupler/models/thermal_neutronics.hpp"

#include "chaoscoupler/models/mms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaoscoupler::models {

using Eigen::VectorXd;
using galerkin::SpMat;

namespace {

constexpr int kRef[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};

double shape(int a, double r, double t) { return 0.25 * (1.0 + kRef[a][0] * r) * (1.0 + kRef[a][1] * t); }
double shape_dr(int a, double t) { return 0.25 * kRef[a][0] * (1.0 + kRef[a][1] * t); }
double shape_dt(int a, double r) { return 0.25 * kRef[a][1] * (1.0 + kRef[a][0] * r); }

double safe_sqrt1(double T) { return std::sqrt(std::max(T + 1.0, 1e-8)); }

}  // namespace

class ThermalNeutronicsModel::TempProblem : public galerkin::ModuleProblem {
 public:
  explicit TempProblem(const ThermalNeutronicsModel& m) : m_(m) {}
  int size() const override { return m_.nodes(); }
  int coupled_size() const override { return m_.nodes(); }
  int param_dim() const override { return m_.params_.s1; }

  VectorXd coefficient(const double* xi) const {
    VectorXd H = VectorXd::Constant(m_.quad_.points, m_.params_.H_bar);
    for (int k = 0; k < m_.params_.s1; ++k) H += xi[k] * m_.H_modes_.row(k).transpose();
    return H;
  }

  void residual(const VectorXd& T, const VectorXd& phi, const double* xi, VectorXd& r,
                const double*) const override {
    const auto& q = m_.quad_;
    const VectorXd H = coefficient(xi);
    const VectorXd Tg = m_.interpolate(T), pg = m_.interpolate(phi);
    r = m_.stiff_ * T;
    for (int g = 0; g < q.points; ++g) {
      double val = H[g] * Tg[g] - m_.params_.E * pg[g] / safe_sqrt1(Tg[g]);
      if (m_.params_.mms) val -= m_.fT_base_[g] + H[g] * m_.T_star_[g];
      val *= q.w[g];
      for (int a = 0; a < 4; ++a) r[q.node(a, g)] += val * q.N(a, g);
    }
  }

  void step_matrix(const VectorXd&, const VectorXd&, const double* xi, SpMat& J) const override {
    J = m_.assemble(VectorXd::Ones(m_.quad_.points), coefficient(xi));
  }

 private:
  const ThermalNeutronicsModel& m_;
};

class ThermalNeutronicsModel::FluxProblem : public galerkin::ModuleProblem {
 public:
  explicit FluxProblem(const ThermalNeutronicsModel& m) : m_(m) {}
  int size() const override { return m_.nodes(); }
  int coupled_size() const override { return m_.nodes(); }
  int param_dim() const override { return m_.params_.s2; }

  VectorXd cross_section(const double* xi) const {
    VectorXd S = VectorXd::Constant(m_.quad_.points, m_.params_.Sigma_bar);
    for (int k = 0; k < m_.params_.s2; ++k) S += xi[k] * m_.S_modes_.row(k).transpose();
    return S;
  }

  void coefficients(const VectorXd& T, const double* xi, VectorXd& k, VectorXd& c, VectorXd& Sg) const {
    const VectorXd Tg = m_.interpolate(T);
    Sg = cross_section(xi);
    k.resize(Tg.size());
    c.resize(Tg.size());
    for (int g = 0; g < Tg.size(); ++g) {
      k[g] = safe_sqrt1(Tg[g]);
      c[g] = Sg[g] / k[g];
    }
  }

  void residual(const VectorXd& phi, const VectorXd& T, const double* xi, VectorXd& r,
                const double*) const override {
    const auto& q = m_.quad_;
    VectorXd k, c, Sg;
    coefficients(T, xi, k, c, Sg);
    r = VectorXd::Zero(m_.nodes());
    for (int g = 0; g < q.points; ++g) {
      double pv = 0.0, gx = 0.0, gy = 0.0;
      for (int a = 0; a < 4; ++a) {
        const double v = phi[q.node(a, g)];
        pv += v * q.N(a, g);
        gx += v * q.dN(2 * a, g);
        gy += v * q.dN(2 * a + 1, g);
      }
      double src = m_.params_.mms ? m_.fphi_base_[g] + Sg[g] * m_.fphi_coef_[g] : m_.params_.S;
      const double val = q.w[g] * (c[g] * pv - src);
      const double kx = q.w[g] * k[g] * gx, ky = q.w[g] * k[g] * gy;
      for (int a = 0; a < 4; ++a) r[q.node(a, g)] += val * q.N(a, g) + kx * q.dN(2 * a, g) + ky * q.dN(2 * a + 1, g);
    }
  }

  void step_matrix(const VectorXd&, const VectorXd& T, const double* xi, SpMat& J) const override {
    VectorXd k, c, Sg;
    coefficients(T, xi, k, c, Sg);
    J = m_.assemble(k, c);
  }

 private:
  const ThermalNeutronicsModel& m_;
};

ThermalNeutronicsModel::ThermalNeutronicsModel(const TnParams& params) : params_(params) {
  const int m = params_.m;
  if (m < 2) throw std::invalid_argument("thermal_neutronics: m must be at least 2");
  h_ = 1.0 / (m - 1);
  field_H_ = randfield::build_field(2, params_.H_bar, params_.delta_H, params_.l_H, params_.s1);
  field_S_ = randfield::build_field(2, params_.Sigma_bar, params_.delta_Sigma, params_.l_Sigma, params_.s2);

  const int ne = (m - 1) * (m - 1);
  auto& q = quad_;
  q.points = 4 * ne;
  q.x.resize(2, q.points);
  q.w.resize(q.points);
  q.N.resize(4, q.points);
  q.dN.resize(8, q.points);
  q.node.resize(4, q.points);
  const double gp = 1.0 / std::sqrt(3.0);
  const double gr[2] = {-gp, gp};
  for (int j = 0; j < m - 1; ++j) {
    for (int i = 0; i < m - 1; ++i) {
      const int e = i + (m - 1) * j;
      const int nodes[4] = {i + m * j, i + 1 + m * j, i + 1 + m * (j + 1), i + m * (j + 1)};
      for (int b = 0; b < 2; ++b) {
        for (int a = 0; a < 2; ++a) {
          const int g = 4 * e + 2 * b + a;
          const double r = gr[a], t = gr[b];
          q.x(0, g) = (i + 0.5 * (1.0 + r)) * h_;
          q.x(1, g) = (j + 0.5 * (1.0 + t)) * h_;
          q.w[g] = 0.25 * h_ * h_;
          for (int c = 0; c < 4; ++c) {
            q.N(c, g) = shape(c, r, t);
            q.dN(2 * c, g) = 2.0 / h_ * shape_dr(c, t);
            q.dN(2 * c + 1, g) = 2.0 / h_ * shape_dt(c, r);
            q.node(c, g) = nodes[c];
          }
        }
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(16 * ne);
  for (int e = 0; e < ne; ++e)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) trip.emplace_back(q.node(a, 4 * e), q.node(b, 4 * e), 0.0);
  pattern_.resize(nodes(), nodes());
  pattern_.setFromTriplets(trip.begin(), trip.end());
  pattern_.makeCompressed();
  slot_.resize(16 * ne);
  for (int e = 0; e < ne; ++e)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        slot_[16 * e + 4 * a + b] =
            static_cast<int>(&pattern_.coeffRef(q.node(a, 4 * e), q.node(b, 4 * e)) - pattern_.valuePtr());

  mass_ = assemble(VectorXd(), VectorXd::Ones(q.points));
  stiff_ = assemble(VectorXd::Ones(q.points), VectorXd());

  H_modes_.resize(params_.s1, q.points);
  S_modes_.resize(params_.s2, q.points);
  const double c3 = std::sqrt(3.0);
  for (int g = 0; g < q.points; ++g) {
    const double* x = q.x.col(g).data();
    for (int k = 0; k < params_.s1; ++k) H_modes_(k, g) = c3 * params_.delta_H * field_H_.gamma(k, x);
    for (int k = 0; k < params_.s2; ++k) S_modes_(k, g) = c3 * params_.delta_Sigma * field_S_.gamma(k, x);
  }
  if (params_.mms) {
    fT_base_.resize(q.points);
    fphi_base_.resize(q.points);
    fphi_coef_.resize(q.points);
    T_star_.resize(q.points);
    for (int g = 0; g < q.points; ++g) {
      const double x1 = q.x(0, g), x2 = q.x(1, g);
      fT_base_[g] = mms::tn_fT_base(x1, x2, params_.E);
      fphi_base_[g] = mms::tn_fphi_base(x1, x2);
      fphi_coef_[g] = mms::tn_fphi_coef(x1, x2);
      T_star_[g] = mms::tn_T(x1, x2);
    }
  }

  if (params_.identity_gramian) {
    gram_[0] = gram_[1] = Gramian::identity(nodes());
  } else {
    gram_[0] = gram_[1] = Gramian::dense(Eigen::MatrixXd(mass_));
  }
  temp_ = std::make_unique<TempProblem>(*this);
  flux_ = std::make_unique<FluxProblem>(*this);
}

ThermalNeutronicsModel::~ThermalNeutronicsModel() = default;

const galerkin::ModuleProblem& ThermalNeutronicsModel::module(int i) const {
  if (i == 1) return *temp_;
  if (i == 2) return *flux_;
  throw std::out_of_range("thermal_neutronics: module index");
}

const Gramian& ThermalNeutronicsModel::gramian(int i) const {
  if (i != 1 && i != 2) throw std::out_of_range("thermal_neutronics: module index");
  return gram_[i - 1];
}

SpMat ThermalNeutronicsModel::assemble(const VectorXd& k, const VectorXd& c) const {
  SpMat A = pattern_;
  double* val = A.valuePtr();
  const auto& q = quad_;
  for (int g = 0; g < q.points; ++g) {
    const int e = g / 4;
    const double kw = k.size() ? k[g] * q.w[g] : 0.0;
    const double cw = c.size() ? c[g] * q.w[g] : 0.0;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        val[slot_[16 * e + 4 * a + b]] += kw * (q.dN(2 * a, g) * q.dN(2 * b, g) + q.dN(2 * a + 1, g) * q.dN(2 * b + 1, g)) +
                                          cw * q.N(a, g) * q.N(b, g);
      }
    }
  }
  return A;
}

VectorXd ThermalNeutronicsModel::interpolate(const VectorXd& u) const {
  const auto& q = quad_;
  VectorXd out(q.points);
  for (int g = 0; g < q.points; ++g) {
    double v = 0.0;
    for (int a = 0; a < 4; ++a) v += u[q.node(a, g)] * q.N(a, g);
    out[g] = v;
  }
  return out;
}

VectorXd ThermalNeutronicsModel::exact_T() const {
  const int m = params_.m;
  VectorXd v(nodes());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) v[i + m * j] = mms::tn_T(i * h_, j * h_);
  return v;
}

VectorXd ThermalNeutronicsModel::exact_phi() const {
  const int m = params_.m;
  VectorXd v(nodes());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) v[i + m * j] = mms::tn_phi(i * h_, j * h_);
  return v;
}

double ThermalNeutronicsModel::mms_error(const VectorXd& T, const VectorXd& phi) const {
  const int m = params_.m;
  const double gr[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double num = 0.0, den = 0.0;
  for (int j = 0; j < m - 1; ++j) {
    for (int i = 0; i < m - 1; ++i) {
      const int nodes[4] = {i + m * j, i + 1 + m * j, i + 1 + m * (j + 1), i + m * (j + 1)};
      for (int b = 0; b < 3; ++b) {
        for (int a = 0; a < 3; ++a) {
          const double x1 = (i + 0.5 * (1.0 + gr[a])) * h_, x2 = (j + 0.5 * (1.0 + gr[b])) * h_;
          double th = 0.0, ph = 0.0;
          for (int c = 0; c < 4; ++c) {
            const double N = shape(c, gr[a], gr[b]);
            th += N * T[nodes[c]];
            ph += N * phi[nodes[c]];
          }
          const double te = mms::tn_T(x1, x2), pe = mms::tn_phi(x1, x2);
          const double w = gw[a] * gw[b];
          num += w * ((te - th) * (te - th) + (pe - ph) * (pe - ph));
          den += w * (te * te + pe * pe);
        }
      }
    }
  }
  return std::sqrt(num / den);
}

}  // namespace chaoscoupler::models
