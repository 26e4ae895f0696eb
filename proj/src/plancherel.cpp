#include "jlm/plancherel.hpp"

#include <cmath>

namespace jlm::plancherel {

namespace {

[[noreturn]] void bad_param(const std::string& msg) { throw Error(ErrorKind::invalid_parameter, msg); }

mpq_class constant_for(SteinbergConstant c, const LocalAlgebraSpec& spec) {
  switch (c) {
    case SteinbergConstant::inverse_total_rank: return mpq_class(1, spec.total_rank());
    case SteinbergConstant::inverse_global_n: return mpq_class(1, spec.n);
    case SteinbergConstant::inverse_local_n: return mpq_class(1, spec.n_v);
  }
  return 1;
}

}  // namespace

std::string to_string(SteinbergConstant c) {
  switch (c) {
    case SteinbergConstant::inverse_total_rank: return "1/(n*d)";
    case SteinbergConstant::inverse_global_n: return "1/n";
    case SteinbergConstant::inverse_local_n: return "1/n_v";
  }
  return "unknown";
}

std::string to_string(ArchTarget t) {
  return t == ArchTarget::real_group ? "real_group" : "quaternionic_group";
}

SteinbergDegree steinberg_degree(long m, long e, const SymbolicScalar& q, std::optional<mpq_class> constant) {
  if (m < 1 || e < 1) bad_param("Steinberg degree needs m >= 1 and e >= 1");
  SteinbergDegree out;
  out.m = m;
  out.e = e;
  mpq_class c = constant.value_or(mpq_class(1, m * e));
  out.convention = constant ? c.get_str() : "1/(m*e)";
  SymbolicScalar v(c);
  for (long i = 1; i < m; ++i) v *= q.pow(e * i) - SymbolicScalar(1L);
  out.value = v;
  return out;
}

RatioBreakdown plancherel_ratio_breakdown(const LocalAlgebraSpec& spec, SteinbergConstant constant) {
  spec.validate();
  const SymbolicScalar q = spec.q ? SymbolicScalar(mpq_class(*spec.q)) : SymbolicScalar::q();
  const mpq_class c = constant_for(constant, spec);
  SteinbergDegree split = steinberg_degree(spec.total_rank(), 1, q, c);
  SteinbergDegree inner = steinberg_degree(spec.n_v, spec.d_v, q, c);
  RatioBreakdown out;
  out.steinberg_quotient = inner.value / split.value;
  out.volume_quotient = localgeom::volume_quotient(spec);
  out.ratio = out.steinberg_quotient * out.volume_quotient;
  out.convention = to_string(constant);
  return out;
}

SymbolicScalar plancherel_ratio(const LocalAlgebraSpec& spec, SteinbergConstant constant) {
  return plancherel_ratio_breakdown(spec, constant).ratio;
}

symexpr::SurdScalar plancherel_ratio_from_volumes(const LocalAlgebraSpec& spec) {
  spec.validate();
  const SymbolicScalar q = spec.q ? SymbolicScalar(mpq_class(*spec.q)) : SymbolicScalar::q();
  // Formal degree under a measure of mass V on K is deg(mass one) / V.
  const auto split_vol = localgeom::tamagawa_volume_max_compact(spec.split_form()).value;
  const auto inner_vol = localgeom::tamagawa_volume_max_compact(spec).value;
  symexpr::SurdScalar split_deg{steinberg_degree(spec.total_rank(), 1, q).value, 1};
  symexpr::SurdScalar inner_deg{steinberg_degree(spec.n_v, spec.d_v, q).value, 1};
  return (inner_deg / inner_vol) / (split_deg / split_vol);
}

// ---------------------------------------------------------------------------

ArchTemperedParam::ArchTemperedParam(ArchTarget target, std::vector<ArchBlock> blocks)
    : target_(target), blocks_(std::move(blocks)) {
  if (blocks_.empty()) bad_param("tempered parameter needs at least one block");
  for (const auto& b : blocks_) {
    if (const auto* ds = std::get_if<DiscreteSeriesBlock>(&b)) {
      if (ds->k < 1) bad_param("discrete series block needs k >= 1");
    } else {
      const auto& ch = std::get<CharacterBlock>(b);
      if (target_ == ArchTarget::quaternionic_group) {
        bad_param("quaternionic parameters consist of discrete series blocks only");
      }
      if (ch.sign != 1 && ch.sign != -1) bad_param("character block sign must be +1 or -1");
      if (!std::isfinite(ch.t)) bad_param("character block needs a finite t");
    }
  }
}

long ArchTemperedParam::rank() const {
  long r = 0;
  for (const auto& b : blocks_) r += std::holds_alternative<DiscreteSeriesBlock>(b) ? 2 : 1;
  return r;
}

bool ArchTemperedParam::all_discrete_series() const {
  for (const auto& b : blocks_) {
    if (!std::holds_alternative<DiscreteSeriesBlock>(b)) return false;
  }
  return true;
}

FormalDegree arch_formal_degree(const ArchTemperedParam& param) {
  if (param.blocks().size() != 1 || !param.all_discrete_series()) {
    throw Error(ErrorKind::not_square_integrable,
                "only a single discrete series block has a formal degree");
  }
  const auto& ds = std::get<DiscreteSeriesBlock>(param.blocks().front());
  const bool real = param.target() == ArchTarget::real_group;
  std::string rep = (real ? "H_" : "V_") + std::to_string(ds.k);
  if (!ds.central_character.empty()) rep += "(" + ds.central_character + ")";
  return {SymbolicScalar(mpq_class(ds.k, 2)) * SymbolicScalar::pi_pow(-2), rep, kTamagawaHaar};
}

FormalDegree sl2_discrete_series_degree(long k) {
  if (k < 2) throw Error(ErrorKind::no_discrete_series, "SL(2,R) has no discrete series pi_k for k < 2");
  return {SymbolicScalar(mpq_class(k - 1, 4)) * SymbolicScalar::pi_pow(-1), "pi_" + std::to_string(k),
          kHyperbolicHaar};
}

std::optional<ArchTemperedParam> jl_match_real(const ArchTemperedParam& param) {
  if (param.target() != ArchTarget::real_group) bad_param("jl_match_real expects a GL(m,R) parameter");
  if (param.rank() % 2 != 0) bad_param("GL(m,R) with m = " + std::to_string(param.rank()) + " odd has no inner form over H");
  if (!param.all_discrete_series()) return std::nullopt;
  return ArchTemperedParam(ArchTarget::quaternionic_group, param.blocks());
}

bool jl_transferable_padic(const std::vector<long>& levi_partition, long d) {
  if (d < 1) bad_param("division algebra index must be positive");
  for (long part : levi_partition) {
    if (part < 1) bad_param("Levi partition entries must be positive");
    if (part % d != 0) return false;
  }
  return true;
}

}  // namespace jlm::plancherel
