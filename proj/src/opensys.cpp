#include "qoc/opensys.hpp"

#include <cmath>

#include "qoc/errors.hpp"

namespace qoc {

cd CorrelationSpec::half_fourier(double omega) const {
  // int_0^T g e^{-r/tau} e^{-i (w + w0) r} dr = g (1 - e^{-aT}) / a,
  // a = 1/tau + i (w + w0)
  cd a{1.0 / tau_B, omega + omega0};
  if (std::isinf(t_max)) return g / a;
  cd e = std::exp(-a * t_max);
  return g * (1.0 - e) / a;
}

HermitianOperator JointModel::interaction() const {
  const int d = joint_dim();
  ComplexMatrix h(d, d);
  for (const auto& [s_op, e_op] : couplings)
    h += kron(s_op.matrix(), e_op.matrix());
  return HermitianOperator(std::move(h));
}

HermitianOperator JointModel::h_total(double s) const {
  ComplexMatrix hs = C.matrix();
  ComplexMatrix diff = B.matrix();
  diff -= C.matrix();
  diff *= cd{s, 0.0};
  hs += diff;
  ComplexMatrix h = kron(hs, ComplexMatrix::identity(env_dim()));
  h += interaction().matrix();
  h += kron(ComplexMatrix::identity(sys_dim()), H_E.matrix());
  return HermitianOperator(std::move(h));
}

void JointModel::validate(int dim_cap) const {
  if (B.dim() != C.dim()) throw ValidationError("JointModel: B/C dimension mismatch");
  if (H_E.dim() != rho_E.dim())
    throw ValidationError("JointModel: H_E/rho_E dimension mismatch");
  for (const auto& [s_op, e_op] : couplings) {
    if (s_op.dim() != sys_dim() || e_op.dim() != env_dim())
      throw ValidationError("JointModel: coupling dimension mismatch");
  }
  if (joint_dim() > dim_cap)
    throw ValidationError("JointModel: joint dimension " +
                          std::to_string(joint_dim()) + " exceeds cap " +
                          std::to_string(dim_cap));
  if (std::abs(rho_E.trace() - 1.0) > 1e-10)
    throw ValidationError("JointModel: Tr(rho_E) != 1");
}

void RedfieldModel::validate() const {
  if (B.dim() != C.dim()) throw ValidationError("RedfieldModel: B/C dimension mismatch");
  const std::size_t k = couplings.size();
  for (const auto& s_op : couplings)
    if (s_op.dim() != B.dim())
      throw ValidationError("RedfieldModel: coupling dimension mismatch");
  if (kernels.size() != k)
    throw ValidationError("RedfieldModel: kernel matrix must be K x K");
  for (const auto& row : kernels)
    if (row.size() != k)
      throw ValidationError("RedfieldModel: kernel matrix must be K x K");
  // G(0) must be PSD as a matrix over coupling indices
  if (k > 0) {
    ComplexMatrix g0(static_cast<int>(k), static_cast<int>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) g0(a, b) = kernels[a][b].g;
    Eigh e = eigh(0.5 * (g0 + g0.adjoint()));
    if (e.values.front() < -1e-10)
      throw ValidationError("RedfieldModel: kernel amplitude matrix not PSD at t=0");
  }
}

double SpectralDensity::operator()(double omega) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::ohmic: {
      // eta * w * e^{-|w|/wc} / (1 - e^{-beta w}), continuous at w = 0.
      double damp = std::exp(-std::abs(omega) / omega_c);
      if (std::abs(omega) < 1e-12) return eta * damp / beta;
      return eta * omega * damp / (1.0 - std::exp(-beta * omega));
    }
  }
  return 0.0;
}

void GAMEModel::validate() const {
  if (B.dim() != C.dim()) throw ValidationError("GAMEModel: B/C dimension mismatch");
  for (const auto& s_op : couplings)
    if (s_op.dim() != B.dim())
      throw ValidationError("GAMEModel: coupling dimension mismatch");
}

Superoperator joint_liouvillian(const JointModel& m, double s) {
  if (s < 0.0 || s > 1.0)
    throw ValidationError("joint_liouvillian: s outside [0,1]");
  return commutator_superop(m.h_total(s));
}

namespace {

HermitianOperator system_hamiltonian(const HermitianOperator& b,
                                     const HermitianOperator& c, double s) {
  HermitianOperator h = c;
  HermitianOperator diff = b;
  diff -= c;
  diff *= s;
  h += diff;
  return h;
}

}  // namespace

std::vector<std::vector<ComplexMatrix>> redfield_w_matrices(
    const RedfieldModel& m, double s) {
  if (s < 0.0 || s > 1.0)
    throw ValidationError("redfield_w_matrices: s outside [0,1]");
  const int n = m.B.dim();
  const std::size_t k = m.couplings.size();
  Eigh h = eigh(system_hamiltonian(m.B, m.C, s).matrix());

  // S_b in the eigenbasis once
  std::vector<ComplexMatrix> s_eig(k);
  for (std::size_t b = 0; b < k; ++b)
    s_eig[b] = h.vectors.adjoint() * m.couplings[b].matrix() * h.vectors;

  std::vector<std::vector<ComplexMatrix>> w(k, std::vector<ComplexMatrix>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      ComplexMatrix wab(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          double w_pq = h.values[p] - h.values[q];
          wab(p, q) = s_eig[b](p, q) * m.kernels[a][b].half_fourier(w_pq);
        }
      w[a][b] = h.vectors * wab * h.vectors.adjoint();
    }
  return w;
}

Superoperator redfield_dissipator(const RedfieldModel& m, double s) {
  auto w = redfield_w_matrices(m, s);
  const std::size_t k = m.couplings.size();
  return superop_from_map(m.B.dim(), [&](const ComplexMatrix& rho) {
    ComplexMatrix out(m.B.dim(), m.B.dim());
    for (std::size_t a = 0; a < k; ++a) {
      const ComplexMatrix& s_a = m.couplings[a].matrix();
      for (std::size_t b = 0; b < k; ++b) {
        out += commutator(w[a][b] * rho, s_a);
        out += commutator(s_a, rho * w[a][b].adjoint());
      }
    }
    return out;
  });
}

Superoperator redfield_generator(const RedfieldModel& m, double s) {
  Superoperator l = commutator_superop(system_hamiltonian(m.B, m.C, s));
  l += redfield_dissipator(m, s);
  return l;
}

ComplexMatrix redfield_adjoint_apply(const RedfieldModel& m, double s,
                                     const ComplexMatrix& x) {
  auto w = redfield_w_matrices(m, s);
  const std::size_t k = m.couplings.size();
  ComplexMatrix out(m.B.dim(), m.B.dim());
  for (std::size_t a = 0; a < k; ++a) {
    const ComplexMatrix& s_a = m.couplings[a].matrix();
    for (std::size_t b = 0; b < k; ++b) {
      out += w[a][b].adjoint() * commutator(x, s_a);
      out += commutator(s_a, x) * w[a][b];
    }
  }
  return out;
}

Superoperator redfield_adjoint_dissipator(const RedfieldModel& m, double s) {
  return superop_from_map(m.B.dim(), [&](const ComplexMatrix& x) {
    return redfield_adjoint_apply(m, s, x);
  });
}

std::vector<ComplexMatrix> game_jump_operators(const GAMEModel& m, double s) {
  if (s < 0.0 || s > 1.0)
    throw ValidationError("game_jump_operators: s outside [0,1]");
  const int n = m.B.dim();
  Eigh h = eigh(system_hamiltonian(m.B, m.C, s).matrix());

  // sqrt(gamma) at every Bohr frequency, validated non-negative
  RealMatrix sqrt_gamma(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double w_pq = h.values[p] - h.values[q];
      double g = m.gamma(w_pq);
      if (g < 0.0)
        throw ValidationError("GAME: gamma(" + std::to_string(w_pq) +
                              ") = " + std::to_string(g) + " is negative");
      sqrt_gamma(p, q) = std::sqrt(g);
    }

  std::vector<ComplexMatrix> out;
  out.reserve(m.couplings.size());
  for (const auto& s_op : m.couplings) {
    ComplexMatrix se = h.vectors.adjoint() * s_op.matrix() * h.vectors;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) se(p, q) *= sqrt_gamma(p, q);
    out.push_back(h.vectors * se * h.vectors.adjoint());
  }
  return out;
}

Superoperator game_dissipator(const GAMEModel& m, double s) {
  auto jumps = game_jump_operators(m, s);
  return superop_from_map(m.B.dim(), [&](const ComplexMatrix& rho) {
    ComplexMatrix out(m.B.dim(), m.B.dim());
    for (const auto& l : jumps) {
      ComplexMatrix ldag = l.adjoint();
      out += commutator(l * rho, ldag);
      out += commutator(l, rho * ldag);
    }
    return out;
  });
}

Superoperator game_generator(const GAMEModel& m, double s) {
  Superoperator l = commutator_superop(system_hamiltonian(m.B, m.C, s));
  l += game_dissipator(m, s);
  return l;
}

ComplexMatrix game_adjoint_apply(const GAMEModel& m, double s,
                                 const ComplexMatrix& x) {
  auto jumps = game_jump_operators(m, s);
  ComplexMatrix out(m.B.dim(), m.B.dim());
  for (const auto& l : jumps) {
    ComplexMatrix ldag = l.adjoint();
    out += ldag * commutator(x, l);
    out += commutator(ldag, x) * l;
  }
  return out;
}

Superoperator game_adjoint_dissipator(const GAMEModel& m, double s) {
  return superop_from_map(m.B.dim(), [&](const ComplexMatrix& x) {
    return game_adjoint_apply(m, s, x);
  });
}

}  // namespace qoc
