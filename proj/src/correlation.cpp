#include "bellbench/correlation.hpp"

#include <cmath>
#include <stdexcept>

namespace bellbench {

namespace {

Eigen::Vector4cd singlet_vector() {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  psi(1) = inv_sqrt2;   // |HV>
  psi(2) = -inv_sqrt2;  // |VH>
  return psi;
}

}  // namespace

bool TwoQubitState::is_physical(double tol) const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol) return false;
  if (std::abs(rho.trace().imag()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho);
  return solver.eigenvalues().minCoeff() >= -tol;
}

TwoQubitState singlet_state() {
  TwoQubitState state;
  Eigen::Vector4cd psi = singlet_vector();
  state.rho = psi * psi.adjoint();
  return state;
}

TwoQubitState werner_state(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::domain_error("werner_state: visibility must be in [0, 1]");
  TwoQubitState state = singlet_state();
  state.rho = visibility * state.rho +
              (1.0 - visibility) * 0.25 * Eigen::Matrix4cd::Identity();
  return state;
}

Eigen::Matrix2cd transmission_projector(PolarizerAngle angle) {
  const double c = std::cos(angle.radians());
  const double s = std::sin(angle.radians());
  Eigen::Matrix2cd p;
  p << c * c, c * s, c * s, s * s;
  return p;
}

OutcomeProbabilities outcome_probabilities(const TwoQubitState& state,
                                           SettingPair setting) {
  const Eigen::Matrix2cd pa = transmission_projector(setting.alice);
  const Eigen::Matrix2cd ma =
      transmission_projector(setting.alice.rotated(90.0));
  const Eigen::Matrix2cd pb = transmission_projector(setting.bob);
  const Eigen::Matrix2cd mb = transmission_projector(setting.bob.rotated(90.0));

  auto joint = [&](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd op = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        op.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return (state.rho * op).trace().real();
  };

  OutcomeProbabilities out;
  out.pp = joint(pa, pb);
  out.pm = joint(pa, mb);
  out.mp = joint(ma, pb);
  out.mm = joint(ma, mb);
  return out;
}

double correlation(const TwoQubitState& state, SettingPair setting) {
  const OutcomeProbabilities p = outcome_probabilities(state, setting);
  return p.pp - p.pm - p.mp + p.mm;
}

double chsh_value(const TwoQubitState& state, PolarizerAngle a0,
                  PolarizerAngle a1, PolarizerAngle b0, PolarizerAngle b1) {
  return correlation(state, {a0, b0}) - correlation(state, {a0, b1}) +
         correlation(state, {a1, b0}) + correlation(state, {a1, b1});
}

double model_correlation(const CorrelationModel& model, SettingPair setting) {
  const double ta = 2.0 * (setting.alice.degrees + model.misalign_a_deg) *
                    (M_PI / 180.0);
  const double tb =
      2.0 * (setting.bob.degrees + model.misalign_b_deg) * (M_PI / 180.0);
  return -(model.v_hv * std::cos(ta) * std::cos(tb) +
           model.v_45 * std::sin(ta) * std::sin(tb));
}

double model_chsh(const CorrelationModel& model, PolarizerAngle a0,
                  PolarizerAngle a1, PolarizerAngle b0, PolarizerAngle b1) {
  return model_correlation(model, {a0, b0}) - model_correlation(model, {a0, b1}) +
         model_correlation(model, {a1, b0}) + model_correlation(model, {a1, b1});
}

}  // namespace bellbench
