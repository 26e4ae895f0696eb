#include "jlm/vndensity.hpp"

#include <cmath>

#include "bigfloat.hpp"

namespace jlm::vndensity {

namespace {

using detail::BigFloat;

void require_same_haar(const std::string& a, const std::string& b) {
  if (a != b) throw Error(ErrorKind::normalization, "Haar normalizations differ: '" + a + "' vs '" + b + "'");
}

}  // namespace

void LatticeDatum::validate() const {
  if (!covolume.is_q_free()) throw Error(ErrorKind::input, "covolume of '" + label + "' depends on q");
  if (sgn(symexpr::evaluate(covolume, 20).value) <= 0) {
    throw Error(ErrorKind::input, "covolume of '" + label + "' is not positive");
  }
}

std::string to_string(DensityKernel k) {
  switch (k) {
    case DensityKernel::constant: return "constant";
    case DensityKernel::t_tanh_half_pi: return "t*tanh(pi*t/2)";
    case DensityKernel::t_coth_half_pi: return "t*coth(pi*t/2)";
  }
  return "unknown";
}

NumericValue Density::at(const mpq_class& t, int digits) const {
  if (kernel == DensityKernel::constant) return symexpr::evaluate(coefficient, digits);
  if (sgn(t) <= 0) throw Error(ErrorKind::domain, "density parameter t must be positive");
  const mpfr_prec_t prec = detail::bits_for_digits(digits);
  const NumericValue c = symexpr::evaluate(coefficient, digits + 10);
  BigFloat arg = BigFloat::pi(prec);
  arg *= mpq_class(t / 2);
  BigFloat k = kernel == DensityKernel::t_tanh_half_pi ? arg.tanh() : arg.coth();
  k *= t;
  BigFloat v(c.value, prec);
  v *= k;
  // A handful of correctly rounded operations plus the coefficient's bound.
  const double mag = v.abs().to_double_up();
  double bound = mag * std::ldexp(16.0, 1 - static_cast<int>(prec)) + c.error_bound * std::fabs(k.to_double());
  bound = std::max(bound * (1.0 + 1e-9), std::numeric_limits<double>::denorm_min());
  return {v.to_mpq(), bound, false};
}

std::string Density::to_string() const {
  if (kernel == DensityKernel::constant) return coefficient.to_string();
  std::string c = coefficient.to_string();
  if (c.find_first_of("+ ") != std::string::npos) c = "(" + c + ")";
  return c + "·" + vndensity::to_string(kernel);
}

SymbolicScalar gamma_dimension(const LatticeDatum& lat, const FormalDegree& deg) {
  lat.validate();
  require_same_haar(lat.haar, deg.haar);
  return lat.covolume * deg.value;
}

GammaDensity gamma_density(const LatticeDatum& lat, const Density& plancherel_density) {
  lat.validate();
  require_same_haar(lat.haar, plancherel_density.haar);
  GammaDensity out = plancherel_density;
  out.coefficient = lat.covolume * plancherel_density.coefficient;
  return out;
}

Density ps_plancherel_density(int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::invalid_parameter, "principal series sign must be +1 or -1");
  return {SymbolicScalar(mpq_class(1, 8)) * SymbolicScalar::pi_pow(-1),
          sign > 0 ? DensityKernel::t_tanh_half_pi : DensityKernel::t_coth_half_pi, "dt",
          plancherel::kHyperbolicHaar};
}

NumericValue ps_density_value(const mpq_class& t, int sign, int digits) {
  if (sgn(t) <= 0) throw Error(ErrorKind::domain, "ps_density needs t > 0");
  return ps_plancherel_density(sign).at(t, digits);
}

double ps_density(double t, int sign) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::domain, "ps_density needs a finite t > 0");
  return ps_density_value(mpq_class(t), sign, 30).to_double();
}

LatticeDatum sl2z_lattice() {
  return {SymbolicScalar(mpq_class(1, 3)) * SymbolicScalar::pi_pow(1), "SL(2,Z)", plancherel::kHyperbolicHaar};
}

CheckResult density_preservation_check(const DensitySide& left, const DensitySide& right) {
  left.lattice.validate();
  right.lattice.validate();
  const auto& l = left.local_density;
  const auto& r = right.local_density;
  if (l.kernel != r.kernel || l.reference_measure != r.reference_measure) {
    throw Error(ErrorKind::input, "densities with different kernels or reference measures are not comparable");
  }
  if (left.lattice.haar != r.haar || right.lattice.haar != l.haar || l.haar != r.haar) {
    throw Error(ErrorKind::input, "covolumes and densities must share one Haar normalization");
  }
  if (!(left.lattice.covolume == right.lattice.covolume)) return {Verdict::not_equal, "covolume"};
  if (!(l.coefficient == r.coefficient)) return {Verdict::not_equal, "density"};
  return {Verdict::equal, ""};
}

CheckResult density_preservation_check(const TransferCase& c) {
  CheckResult cov = adelic::covolume_equality_check(c.left, c.right, c.setup);
  if (cov.verdict != Verdict::equal) {
    return {cov.verdict, cov.verdict == Verdict::not_equal ? "covolume: " + cov.detail : cov.detail};
  }
  for (const auto& fp : c.finite_places) {
    if (!plancherel::plancherel_ratio(fp.spec).is_one()) return {Verdict::not_equal, "density at " + fp.place};
  }
  for (std::size_t i = 0; i < c.archimedean.size(); ++i) {
    const auto& param = c.archimedean[i];
    auto image = plancherel::jl_match_real(param);
    if (!image) {
      throw Error(ErrorKind::input, "archimedean parameter " + std::to_string(i) + " transfers to zero; nothing to compare");
    }
    for (std::size_t b = 0; b < param.blocks().size(); ++b) {
      plancherel::ArchTemperedParam lhs(param.target(), {param.blocks()[b]});
      plancherel::ArchTemperedParam rhs(image->target(), {image->blocks()[b]});
      if (!(plancherel::arch_formal_degree(lhs).value == plancherel::arch_formal_degree(rhs).value)) {
        return {Verdict::not_equal, "archimedean degree " + std::to_string(i)};
      }
    }
  }
  return {Verdict::equal, ""};
}

}  // namespace jlm::vndensity
