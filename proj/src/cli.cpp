#include "jlm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"

#include "jlm/adelic.hpp"
#include "jlm/json_io.hpp"
#include "jlm/localgeom.hpp"
#include "jlm/oracle.hpp"
#include "jlm/plancherel.hpp"
#include "jlm/vndensity.hpp"

namespace jlm::cli {

namespace {

using json = nlohmann::json;
using json_io::InputError;
using json_io::Node;
using localgeom::LocalAlgebraSpec;
using symexpr::NumericValue;
using symexpr::SurdScalar;
using symexpr::SymbolicScalar;

struct Common {
  std::string format = "text";
  bool numeric = false;
  int digits = 30;
  long prime_cap = 0;  // 0: not given
  std::string input;
};

struct Result {
  json doc = json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string text;
  int exit = kOk;
};

[[noreturn]] void input_error(const std::string& msg) { throw Error(ErrorKind::input, msg); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) input_error("cannot open input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_input(const Common& c) {
  if (c.input.empty()) input_error("this subcommand needs --input FILE");
  return json_io::parse_document(read_file(c.input));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void emit(const Result& r, const Common& c, std::ostream& out) {
  if (c.format == "json") {
    out << r.doc.dump(2) << "\n";
  } else if (c.format == "csv") {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
      out << "\n";
    };
    line(r.header);
    for (const auto& row : r.rows) line(row);
  } else {
    out << r.text;
    if (!r.text.empty() && r.text.back() != '\n') out << "\n";
  }
}

std::string format_bound(double b) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", b);
  return buf;
}

std::string numeric_text(const NumericValue& v, int digits) {
  std::string s = v.to_string(digits);
  if (!v.exact) s += " ± " + format_bound(v.error_bound);
  return s;
}

// A scalar in canonical text, or its evaluation under --numeric.
std::pair<json, std::string> render(const SymbolicScalar& s, const Common& c) {
  if (!c.numeric) return {s.to_string(), s.to_string()};
  if (!s.is_q_free()) input_error("--numeric needs a numeric q; " + s.to_string() + " depends on q");
  const NumericValue v = symexpr::evaluate(s, c.digits);
  return {json_io::to_json(v, c.digits), numeric_text(v, c.digits)};
}

std::pair<json, std::string> render(const SurdScalar& s, const Common& c) {
  if (!c.numeric) {
    return {json{{"scalar", s.scalar.to_string()}, {"radicand", s.radicand.get_str()}}, s.to_string()};
  }
  if (!s.scalar.is_q_free()) input_error("--numeric needs a numeric q; " + s.to_string() + " depends on q");
  const NumericValue v = symexpr::evaluate(s, c.digits);
  return {json_io::to_json(v, c.digits), numeric_text(v, c.digits)};
}

// ---------------------------------------------------------------------------
// Local specs from flags or --input

struct SpecFlags {
  std::string q = "symbolic";
  std::string disc = "1";
  long n = 1;
  long d = 1;
  long n_v = 0;  // 0: n*d/d_v
  long d_v = 1;
};

void add_spec_flags(CLI::App* sub, SpecFlags& f) {
  sub->add_option("--q", f.q, "residue field size, or 'symbolic'");
  sub->add_option("--disc", f.disc, "local discriminant norm d(F_v)");
  sub->add_option("--n", f.n, "global matrix size n");
  sub->add_option("--d", f.d, "global division algebra index d");
  sub->add_option("--nv", f.n_v, "local matrix size n_v (default n*d/d_v)");
  sub->add_option("--dv", f.d_v, "local division algebra index d_v");
}

mpz_class parse_integer_flag(const std::string& name, const std::string& text) {
  mpz_class z;
  if (text.empty() || z.set_str(text, 10) != 0) input_error("--" + name + " expects an integer, got '" + text + "'");
  return z;
}

LocalAlgebraSpec spec_from(const SpecFlags& f, const Common& c) {
  if (!c.input.empty()) {
    const json doc = load_input(c);
    return json_io::local_spec_from_json(Node(doc));
  }
  LocalAlgebraSpec s;
  if (f.q != "symbolic") s.q = parse_integer_flag("q", f.q);
  s.local_disc_norm = parse_integer_flag("disc", f.disc);
  s.n = f.n;
  s.d = f.d;
  s.d_v = f.d_v;
  if (f.n_v > 0) {
    s.n_v = f.n_v;
  } else {
    if (f.d_v < 1 || (f.n * f.d) % f.d_v != 0) {
      throw Error(ErrorKind::spec_violation, "d_v = " + std::to_string(f.d_v) + " does not divide n*d");
    }
    s.n_v = f.n * f.d / f.d_v;
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Subcommands

Result cmd_volume(const SpecFlags& f, const std::string& normalization, const Common& c) {
  const LocalAlgebraSpec spec = spec_from(f, c);
  localgeom::VolumeResult v;
  if (normalization == "tamagawa") v = localgeom::tamagawa_volume_max_compact(spec);
  else v = localgeom::volume_max_compact_mult(spec);
  auto [j, text] = render(v.value, c);
  Result r;
  r.doc = {{"value", j}, {"normalization", localgeom::to_string(v.normalization)}, {"spec", json_io::to_json(spec)}};
  r.header = {"value", "normalization"};
  r.rows = {{text, std::string(localgeom::to_string(v.normalization))}};
  r.text = text;
  return r;
}

Result cmd_disc_norm(const SpecFlags& f, const Common& c) {
  const LocalAlgebraSpec spec = spec_from(f, c);
  auto [j, text] = render(localgeom::disc_norm(spec), c);
  Result r;
  r.doc = {{"value", j}, {"spec", json_io::to_json(spec)}};
  r.header = {"disc_norm"};
  r.rows = {{text}};
  r.text = text;
  return r;
}

Result cmd_steinberg(long m, long e, const std::string& q, const std::string& constant, const Common& c) {
  const SymbolicScalar qs = q == "symbolic" ? SymbolicScalar::q() : SymbolicScalar(mpq_class(parse_integer_flag("q", q)));
  std::optional<mpq_class> k;
  if (!constant.empty()) k = symexpr::parse_rational(constant);
  const auto deg = plancherel::steinberg_degree(m, e, qs, k);
  auto [j, text] = render(deg.value, c);
  Result r;
  r.doc = {{"value", j}, {"m", m}, {"e", e}, {"convention", deg.convention},
           {"normalization", localgeom::to_string(deg.normalization)}};
  r.header = {"m", "e", "value", "convention"};
  r.rows = {{std::to_string(m), std::to_string(e), text, deg.convention}};
  r.text = text;
  return r;
}

plancherel::SteinbergConstant convention_from(const std::string& s) {
  if (s == "nd") return plancherel::SteinbergConstant::inverse_total_rank;
  if (s == "n") return plancherel::SteinbergConstant::inverse_global_n;
  if (s == "nv") return plancherel::SteinbergConstant::inverse_local_n;
  input_error("--convention must be nd, n or nv");
}

Result cmd_ratio(const SpecFlags& f, const std::string& convention, const Common& c) {
  const LocalAlgebraSpec spec = spec_from(f, c);
  const auto b = plancherel::plancherel_ratio_breakdown(spec, convention_from(convention));
  auto [j, text] = render(b.ratio, c);
  Result r;
  r.doc = {{"ratio", j},
           {"steinberg_quotient", b.steinberg_quotient.to_string()},
           {"volume_quotient", b.volume_quotient.to_string()},
           {"convention", b.convention},
           {"spec", json_io::to_json(spec)}};
  r.header = {"ratio", "steinberg_quotient", "volume_quotient", "convention"};
  r.rows = {{text, b.steinberg_quotient.to_string(), b.volume_quotient.to_string(), b.convention}};
  r.text = text;
  return r;
}

Result cmd_arch_degree(long k, const std::string& target, const std::string& omega, const std::string& group,
                       const Common& c) {
  plancherel::FormalDegree deg;
  if (group == "sl2") {
    deg = plancherel::sl2_discrete_series_degree(k);
  } else if (group == "gl2") {
    plancherel::ArchTarget t = plancherel::ArchTarget::real_group;
    if (target == "quaternionic") t = plancherel::ArchTarget::quaternionic_group;
    else if (target != "real") input_error("--target must be real or quaternionic");
    deg = plancherel::arch_formal_degree(plancherel::ArchTemperedParam(t, {plancherel::DiscreteSeriesBlock{k, omega}}));
  } else {
    input_error("--group must be gl2 or sl2");
  }
  auto [j, text] = render(deg.value, c);
  Result r;
  r.doc = {{"value", j}, {"representation", deg.representation}, {"haar", deg.haar}};
  r.header = {"k", "representation", "value"};
  r.rows = {{std::to_string(k), deg.representation, text}};
  r.text = text;
  return r;
}

std::vector<plancherel::ArchBlock> parse_blocks(const std::string& spec) {
  std::vector<plancherel::ArchBlock> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string p;
    while (std::getline(is, p, ':')) parts.push_back(p);
    try {
      if (parts.size() >= 2 && parts.size() <= 3 && parts[0] == "DS2") {
        out.push_back(plancherel::DiscreteSeriesBlock{std::stol(parts[1]), parts.size() == 3 ? parts[2] : ""});
        continue;
      }
      if (parts.size() >= 3 && parts.size() <= 4 && parts[0] == "CH1" && (parts[1] == "+" || parts[1] == "-")) {
        out.push_back(plancherel::CharacterBlock{parts[1] == "+" ? 1 : -1, std::stod(parts[2]),
                                                 parts.size() == 4 ? parts[3] : ""});
        continue;
      }
    } catch (const std::logic_error&) {
    }
    input_error("bad block '" + item + "' (expected DS2:k[:omega] or CH1:+|-:t[:label])");
  }
  return out;
}

std::string param_text(const plancherel::ArchTemperedParam& p) {
  const bool real = p.target() == plancherel::ArchTarget::real_group;
  std::string s = "[";
  for (std::size_t i = 0; i < p.blocks().size(); ++i) {
    if (i) s += ", ";
    if (const auto* ds = std::get_if<plancherel::DiscreteSeriesBlock>(&p.blocks()[i])) {
      s += (real ? "H_" : "V_") + std::to_string(ds->k);
      if (!ds->central_character.empty()) s += "(" + ds->central_character + ")";
    } else {
      const auto& ch = std::get<plancherel::CharacterBlock>(p.blocks()[i]);
      std::ostringstream os;
      os << "chi(" << (ch.sign > 0 ? "+" : "-") << ", " << ch.t << (ch.label.empty() ? "" : ", " + ch.label) << ")";
      s += os.str();
    }
  }
  return s + "]";
}

Result cmd_jl_real(const std::string& blocks, const Common& c) {
  std::optional<plancherel::ArchTemperedParam> param;
  if (!c.input.empty()) {
    const json doc = load_input(c);
    param = json_io::arch_param_from_json(Node(doc));
  } else {
    if (blocks.empty()) input_error("jl-real needs --blocks or --input");
    param = plancherel::ArchTemperedParam::real(parse_blocks(blocks));
  }
  const auto image = plancherel::jl_match_real(*param);
  Result r;
  r.doc = json_io::to_json(image);
  r.header = {"zero", "image"};
  r.rows = {{image ? "false" : "true", image ? param_text(*image) : ""}};
  r.text = image ? param_text(*image) : "0";
  return r;
}

std::uint32_t effective_cap(const Common& c, std::uint32_t fallback) {
  return c.prime_cap > 0 ? static_cast<std::uint32_t>(c.prime_cap) : fallback;
}

Result cmd_covolume(const Common& c) {
  const json doc = load_input(c);
  adelic::CovolumeExpr expr = json_io::covolume_expr_from_json(Node(doc));
  if (expr.tail) expr.tail->prime_cap = effective_cap(c, expr.tail->prime_cap);
  const auto v = adelic::covolume_S_arithmetic(expr);
  Result r;
  if (v.exact && !c.numeric) {
    auto [j, text] = render(*v.exact, c);
    r.doc = {{"value", j}, {"exact", true}};
    r.header = {"value", "error_bound", "exact"};
    r.rows = {{text, "0", "true"}};
    r.text = text;
    return r;
  }
  r.doc = {{"value", json_io::to_json(v.numeric, c.digits)}, {"exact", v.numeric.exact}};
  r.header = {"value", "error_bound", "exact"};
  r.rows = {{v.numeric.to_string(c.digits), format_bound(v.numeric.error_bound), v.numeric.exact ? "true" : "false"}};
  r.text = numeric_text(v.numeric, c.digits);
  return r;
}

int verdict_exit(adelic::Verdict v) {
  switch (v) {
    case adelic::Verdict::equal: return kOk;
    case adelic::Verdict::not_equal: return kNotEqual;
    case adelic::Verdict::inconclusive: return kInconclusive;
  }
  return kInputError;
}

adelic::CovolumeSide side_from_json(const Node& node, const adelic::GlobalSetup& setup) {
  return {json_io::covolume_expr_from_json(node["expr"]), json_io::index_from_json(node["index"], setup)};
}

Result verdict_result(const adelic::CheckResult& res) {
  Result r;
  r.doc = {{"verdict", adelic::to_string(res.verdict)}, {"detail", res.detail}};
  r.header = {"verdict", "detail"};
  r.rows = {{adelic::to_string(res.verdict), res.detail}};
  r.text = adelic::to_string(res.verdict) + (res.detail.empty() ? "" : " (" + res.detail + ")");
  r.exit = verdict_exit(res.verdict);
  return r;
}

Result cmd_check_covolume_eq(const Common& c) {
  const json doc = load_input(c);
  const Node root(doc);
  const auto setup = json_io::setup_from_json(root["setup"]);
  return verdict_result(
      adelic::covolume_equality_check(side_from_json(root["left"], setup), side_from_json(root["right"], setup), setup));
}

std::pair<long, long> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon != std::string::npos) {
      const long a = std::stol(s.substr(0, colon));
      const long b = std::stol(s.substr(colon + 1));
      if (a <= b) return {a, b};
    }
  } catch (const std::logic_error&) {
  }
  input_error("range '" + s + "' must look like a:b with a <= b");
}

Result cmd_gamma_dim(const std::string& covol, const std::string& degree, const std::string& k,
                     const std::string& k_range, const Common& c) {
  const vndensity::LatticeDatum lat{symexpr::parse_scalar(covol), "lattice", "given"};
  auto value_at = [&](std::optional<long> kv) {
    symexpr::Bindings b;
    if (kv) b.emplace("k", *kv);
    const plancherel::FormalDegree deg{symexpr::parse_scalar(degree, b), "degree", "given"};
    return vndensity::gamma_dimension(lat, deg);
  };
  Result r;
  r.header = {"k", "gamma_dimension"};
  if (!k_range.empty()) {
    const auto [a, b] = parse_range(k_range);
    if (b - a > 100000) input_error("k range too long");
    json rows = json::array();
    for (long kv = a; kv <= b; ++kv) {
      auto [j, text] = render(value_at(kv), c);
      rows.push_back({{"k", kv}, {"gamma_dimension", j}});
      r.rows.push_back({std::to_string(kv), text});
      r.text += std::to_string(kv) + "\t" + text + "\n";
    }
    r.doc = {{"rows", rows}};
    return r;
  }
  std::optional<long> kv;
  if (!k.empty()) {
    try {
      std::size_t used = 0;
      kv = std::stol(k, &used);
      if (used != k.size()) throw std::invalid_argument(k);
    } catch (const std::logic_error&) {
      input_error("--k expects an integer, got '" + k + "'");
    }
  }
  auto [j, text] = render(value_at(kv), c);
  r.doc = {{"gamma_dimension", j}};
  if (kv) r.doc["k"] = *kv;
  r.rows = {{kv ? std::to_string(*kv) : "", text}};
  r.text = text;
  return r;
}

std::vector<mpq_class> parse_t_values(const std::string& list, const std::string& grid) {
  std::vector<mpq_class> ts;
  if (!grid.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(grid);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) input_error("--t-grid must look like start:stop:step");
    const mpq_class a = symexpr::parse_rational(parts[0]);
    const mpq_class b = symexpr::parse_rational(parts[1]);
    const mpq_class h = symexpr::parse_rational(parts[2]);
    if (sgn(h) <= 0 || a > b) input_error("--t-grid needs start <= stop and a positive step");
    if ((b - a) / h > 100000) input_error("--t-grid has too many points");
    for (mpq_class t = a; t <= b; t += h) ts.push_back(t);
  }
  if (!list.empty()) {
    std::stringstream ss(list);
    std::string p;
    while (std::getline(ss, p, ',')) ts.push_back(symexpr::parse_rational(p));
  }
  return ts;
}

std::string rational_text(const mpq_class& t) {
  // Decimal when finite and short; the exact fraction otherwise.
  return NumericValue::exact_value(t).to_string(20);
}

Result cmd_gamma_density(const std::string& covol, const std::string& sign, const std::string& tlist,
                         const std::string& grid, const Common& c) {
  if (sign != "+" && sign != "-") input_error("--sign must be + or -");
  const auto local = vndensity::ps_plancherel_density(sign == "+" ? 1 : -1);
  const vndensity::LatticeDatum lat{symexpr::parse_scalar(covol), "lattice", local.haar};
  const auto gd = vndensity::gamma_density(lat, local);
  const auto ts = parse_t_values(tlist, grid);
  Result r;
  r.header = {"t", "ps_density", "gamma_density"};
  if (ts.empty()) {
    r.doc = {{"coefficient", gd.coefficient.to_string()},
             {"kernel", vndensity::to_string(gd.kernel)},
             {"reference_measure", gd.reference_measure},
             {"density", gd.to_string()}};
    r.header = {"coefficient", "kernel", "reference_measure"};
    r.rows = {{gd.coefficient.to_string(), vndensity::to_string(gd.kernel), gd.reference_measure}};
    r.text = gd.to_string() + " " + gd.reference_measure;
    return r;
  }
  json rows = json::array();
  for (const auto& t : ts) {
    const NumericValue ps = local.at(t, c.digits);
    const NumericValue g = gd.at(t, c.digits);
    rows.push_back({{"t", rational_text(t)},
                    {"ps_density", json_io::to_json(ps, c.digits)},
                    {"gamma_density", json_io::to_json(g, c.digits)}});
    r.rows.push_back({rational_text(t), ps.to_string(c.digits), g.to_string(c.digits)});
    r.text += rational_text(t) + "\t" + ps.to_string(c.digits) + "\t" + g.to_string(c.digits) + "\n";
  }
  r.doc = {{"density", gd.to_string()}, {"reference_measure", gd.reference_measure}, {"rows", rows}};
  return r;
}

// ---------------------------------------------------------------------------
// verify-all

struct Sweep {
  explicit Sweep(std::string n) : name(std::move(n)) {}

  std::string name;
  long cases = 0;
  long passed = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++cases;
    if (ok) ++passed;
    else if (first_failure.empty()) first_failure = what;
  }
};

std::vector<LocalAlgebraSpec> symbolic_specs(long max_nd) {
  std::vector<LocalAlgebraSpec> out;
  for (long nd = 1; nd <= max_nd; ++nd) {
    for (long d = 1; d <= nd; ++d) {
      if (nd % d) continue;
      for (long dv = 1; dv <= nd; ++dv) {
        if (nd % dv) continue;
        LocalAlgebraSpec s;
        s.n = nd / d;
        s.d = d;
        s.d_v = dv;
        s.n_v = nd / dv;
        out.push_back(s);
      }
    }
  }
  return out;
}

std::string spec_label(const LocalAlgebraSpec& s) {
  return "n=" + std::to_string(s.n) + " d=" + std::to_string(s.d) + " d_v=" + std::to_string(s.d_v) +
         (s.q ? " q=" + s.q->get_str() : "");
}

std::vector<Sweep> verify_all(long max_nd, std::uint32_t prime_cap) {
  std::vector<Sweep> out;
  const auto specs = symbolic_specs(max_nd);

  Sweep ratio{"ratio_identity"};
  Sweep conventions{"ratio_convention_independence"};
  Sweep from_volumes{"ratio_from_tamagawa_volumes"};
  Sweep quotient{"volume_quotient_consistency"};
  for (const auto& s : specs) {
    const auto r = plancherel::plancherel_ratio(s);
    ratio.record(r.is_one(), spec_label(s));
    conventions.record(plancherel::plancherel_ratio(s, plancherel::SteinbergConstant::inverse_global_n) == r &&
                           plancherel::plancherel_ratio(s, plancherel::SteinbergConstant::inverse_local_n) == r,
                       spec_label(s));
    const auto v = plancherel::plancherel_ratio_from_volumes(s);
    from_volumes.record(!v.has_surd() && v.scalar.is_one(), spec_label(s));
    auto lhs = localgeom::tamagawa_volume_max_compact(s).value;
    lhs.scalar *= localgeom::volume_quotient(s);
    quotient.record(lhs == localgeom::tamagawa_volume_max_compact(s.split_form()).value, spec_label(s));
  }
  out.insert(out.end(), {ratio, conventions, from_volumes, quotient});

  Sweep vol{"volume_vs_enumeration"};
  for (long q : {2L, 3L}) {
    for (long dv : {1L, 2L}) {
      for (long nv = 1; nv <= 3; ++nv) {
        for (long m = 1; m <= 2; ++m) {
          LocalAlgebraSpec s;
          s.q = q;
          s.n = nv;
          s.d = dv;
          s.n_v = nv;
          s.d_v = dv;
          const auto v = oracle::volume_formula_oracle_check(s, m);
          vol.record(v.equal, spec_label(s) + " m=" + std::to_string(m));
        }
      }
    }
  }
  out.push_back(vol);

  Sweep anchors{"gl_order_anchors"};
  using oracle::FiniteRingSpec;
  anchors.record(oracle::count_gl_by_enumeration(2, FiniteRingSpec::prime_field(2)) == 6, "GL(2,F_2)");
  anchors.record(oracle::count_gl_by_enumeration(2, FiniteRingSpec::prime_field(3)) == 48, "GL(2,F_3)");
  anchors.record(oracle::count_gl_by_enumeration(3, FiniteRingSpec::prime_field(2)) == 168, "GL(3,F_2)");
  anchors.record(oracle::count_gl_by_enumeration(2, FiniteRingSpec::chain_ring(2, 1, 2)) == 96, "GL(2,Z/4)");
  out.push_back(anchors);

  Sweep gamma{"gamma_dimension_table"};
  const auto lat = vndensity::sl2z_lattice();
  for (long k = 2; k <= 12; ++k) {
    gamma.record(vndensity::gamma_dimension(lat, plancherel::sl2_discrete_series_degree(k)) ==
                     SymbolicScalar(mpq_class(k - 1, 12)),
                 "k=" + std::to_string(k));
  }
  out.push_back(gamma);

  Sweep arch{"archimedean_degrees"};
  for (long k = 1; k <= 10; ++k) {
    const auto real = plancherel::ArchTemperedParam::real({plancherel::DiscreteSeriesBlock{k, "w"}});
    const auto image = plancherel::jl_match_real(real);
    const SymbolicScalar expected = SymbolicScalar(mpq_class(k, 2)) * SymbolicScalar::pi_pow(-2);
    arch.record(image && plancherel::arch_formal_degree(real).value == expected &&
                    plancherel::arch_formal_degree(*image).value == expected,
                "k=" + std::to_string(k));
  }
  out.push_back(arch);

  Sweep ps{"principal_series_density"};
  const SymbolicScalar third_pi = lat.covolume;
  const double pi = std::acos(-1.0);
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (int sign : {1, -1}) {
      const double lhs = symexpr::evaluate(third_pi, 30).to_double() * vndensity::ps_density(t, sign);
      const double h = std::tanh(pi * t / 2);
      const double rhs = t / 24 * (sign > 0 ? h : 1 / h);
      ps.record(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(rhs), "t=" + std::to_string(t));
    }
  }
  out.push_back(ps);

  Sweep tail{"euler_tail_zeta2"};
  {
    adelic::RestrictedProductSpec spec;
    spec.tail = adelic::TailRule::one_minus_q_pow(-2, true);
    spec.prime_cap = prime_cap;
    const auto v = adelic::restricted_product_measure(spec);
    const auto zeta2 = symexpr::evaluate(SymbolicScalar(mpq_class(1, 6)) * SymbolicScalar::pi_pow(2), 40);
    mpq_class diff = v.value - zeta2.value;
    const double err = std::fabs(diff.get_d());
    tail.record(v.error_bound <= 1e-6 && err <= v.error_bound + zeta2.error_bound, "zeta(2)");
  }
  out.push_back(tail);

  Sweep index{"power_index_oracles"};
  for (long w1 = 1; w1 <= 200; ++w1) {
    for (long w2 = w1; w1 * w2 <= 200; ++w2) {
      for (long n = 1; n <= 8; ++n) {
        const std::vector<long> orders = w1 == 1 ? std::vector<long>{w2} : std::vector<long>{w1, w2};
        index.record(adelic::abelian_power_index(0, orders, n) == oracle::abelian_index_oracle(orders, n),
                     "Z/" + std::to_string(w1) + " x Z/" + std::to_string(w2) + " n=" + std::to_string(n));
      }
    }
  }
  for (long p : {2L, 3L, 5L, 7L}) {
    for (long n = 1; n <= 8; ++n) {
      long v = 0, pv = 1;
      for (long t = n; t % p == 0; t /= p) {
        ++v;
        pv *= p;
      }
      const long mu = p == 2 ? (n % 2 == 0 ? 2 : 1) : std::gcd(n, p - 1);
      const adelic::PadicPlaceKind kind{p, p, mu, pv};
      index.record(adelic::local_power_index(kind, n) == oracle::padic_power_index_oracle(p, n, v + (p == 2 ? 3 : 2)),
                   "Q_" + std::to_string(p) + " n=" + std::to_string(n));
    }
  }
  out.push_back(index);
  return out;
}

Result cmd_verify_all(long max_nd, const Common& c) {
  if (max_nd < 1 || max_nd > 24) input_error("--max-nd must lie in [1, 24]");
  const auto sweeps = verify_all(max_nd, effective_cap(c, adelic::kDefaultPrimeCap));
  Result r;
  r.header = {"check", "cases", "passed", "status", "first_failure"};
  json checks = json::array();
  bool all = true;
  for (const auto& s : sweeps) {
    const bool ok = s.cases == s.passed;
    all = all && ok;
    const std::string status = ok ? "PASS" : "FAIL";
    checks.push_back({{"check", s.name}, {"cases", s.cases}, {"passed", s.passed}, {"status", status},
                      {"first_failure", s.first_failure}});
    r.rows.push_back({s.name, std::to_string(s.cases), std::to_string(s.passed), status, s.first_failure});
    char line[160];
    std::snprintf(line, sizeof line, "%-32s %6ld/%-6ld %s\n", s.name.c_str(), s.passed, s.cases, status.c_str());
    r.text += line;
    if (!ok) r.text += "  first failure: " + s.first_failure + "\n";
  }
  r.text += all ? "all checks passed\n" : "some checks FAILED\n";
  r.doc = {{"max_nd", max_nd}, {"checks", checks}, {"all_passed", all}};
  r.exit = all ? kOk : kNotEqual;
  return r;
}

// ---------------------------------------------------------------------------
// verify-jl

Result cmd_verify_jl(const Common& c) {
  const json doc = load_input(c);
  const Node root(doc);
  const auto setup = json_io::setup_from_json(root["setup"]);
  const long n = root["n"].as_long();
  const long d = root["d"].as_long();
  if (n < 1 || d < 1) root.fail("n and d must be positive");
  const long nd = n * d;

  std::map<std::string, std::pair<long, long>> declared;  // place -> (n_v, d_v)
  if (auto places = root.get("places")) {
    for (std::size_t i = 0; i < places->size(); ++i) {
      const Node p = (*places)[i];
      const auto name = p["place"].as_string();
      if (!setup.find(name)) p["place"].fail("'" + name + "' is not a finite place of the setup");
      const long dv = p["d_v"].as_long();
      const long nv = p.get("n_v") ? p["n_v"].as_long() : (dv > 0 && nd % dv == 0 ? nd / dv : 0);
      if (dv < 1 || nv < 1 || nv * dv != nd) p.fail("n_v * d_v must equal n * d = " + std::to_string(nd));
      if (dv != 1 && !setup.ram_set.contains(name)) p["d_v"].fail("d_v != 1 at '" + name + "', which is not in ram_set");
      if (!declared.emplace(name, std::make_pair(nv, dv)).second) p["place"].fail("place '" + name + "' listed twice");
    }
  }

  Result r;
  r.header = {"place", "kind", "status", "value"};
  json finite = json::array();
  bool all = true;
  std::string witness;
  mpz_class disc_product = 1;
  for (const auto& fp : setup.places) {
    LocalAlgebraSpec s;
    s.q = fp.q;
    s.local_disc_norm = fp.local_disc_norm.value_or(1);
    s.n = n;
    s.d = d;
    auto it = declared.find(fp.name);
    s.n_v = it != declared.end() ? it->second.first : nd;
    s.d_v = it != declared.end() ? it->second.second : 1;
    disc_product *= s.local_disc_norm;
    const auto ratio = plancherel::plancherel_ratio(s);
    const bool ok = ratio.is_one();
    if (!ok && witness.empty()) witness = "place " + fp.name;
    all = all && ok;
    finite.push_back({{"place", fp.name}, {"q", fp.q.get_str()}, {"n_v", s.n_v}, {"d_v", s.d_v},
                      {"ratio", ratio.to_string()}, {"status", ok ? "equal" : "not_equal"}});
    r.rows.push_back({fp.name, "finite", ok ? "equal" : "not_equal", ratio.to_string()});
    r.text += "place " + fp.name + " (q=" + fp.q.get_str() + ", d_v=" + std::to_string(s.d_v) +
              "): ratio " + ratio.to_string() + "\n";
  }

  json arch = json::array();
  std::set<std::string> seen_arch;
  if (auto entries = root.get("archimedean")) {
    for (std::size_t i = 0; i < entries->size(); ++i) {
      const Node e = (*entries)[i];
      const auto name = e["place"].as_string();
      if (!setup.is_archimedean(name)) e["place"].fail("'" + name + "' is not an archimedean place");
      if (!seen_arch.insert(name).second) e["place"].fail("place '" + name + "' listed twice");
      const auto param = json_io::arch_param_from_json(e);
      if (param.target() != plancherel::ArchTarget::real_group) e.fail("archimedean parameters are given on GL(nd, R)");
      if (param.rank() != nd) e.fail("parameter rank " + std::to_string(param.rank()) + " differs from n*d");
      std::string status;
      std::string value;
      if (name.front() == 'c') {
        e.fail("complex places are not covered by the real correspondence");
      } else if (!setup.ram_set.contains(name)) {
        status = "split";
      } else {
        const auto image = plancherel::jl_match_real(param);
        if (!image) {
          status = "zero transfer";
        } else {
          bool same = true;
          for (std::size_t b = 0; b < param.blocks().size(); ++b) {
            const auto l = plancherel::arch_formal_degree(plancherel::ArchTemperedParam(param.target(), {param.blocks()[b]}));
            const auto rr = plancherel::arch_formal_degree(plancherel::ArchTemperedParam(image->target(), {image->blocks()[b]}));
            same = same && l.value == rr.value;
            value += (b ? ", " : "") + l.value.to_string();
          }
          status = same ? "equal" : "not_equal";
          if (!same && witness.empty()) witness = "archimedean " + name;
          all = all && same;
        }
      }
      arch.push_back({{"place", name}, {"status", status}, {"degrees", value}});
      r.rows.push_back({name, "archimedean", status, value});
      r.text += "place " + name + ": " + status + (value.empty() ? "" : " (degrees " + value + ")") + "\n";
    }
  }
  for (const auto& a : setup.ram_set) {
    if (setup.is_archimedean(a) && a.front() == 'c') input_error("complex place '" + a + "' cannot ramify");
    if (!setup.is_archimedean(a) && !declared.contains(a)) {
      input_error("ramified place '" + a + "' needs an entry in places with its d_v");
    }
  }

  const bool tamagawa_ok = disc_product == setup.abs_discriminant;
  if (!tamagawa_ok && witness.empty()) witness = "tamagawa bookkeeping";
  all = all && tamagawa_ok;
  const json tamagawa{{"product_local_disc_norms", disc_product.get_str()},
                      {"abs_discriminant", setup.abs_discriminant.get_str()},
                      {"consistent", tamagawa_ok}};
  r.rows.push_back({"global", "tamagawa", tamagawa_ok ? "consistent" : "inconsistent",
                    disc_product.get_str() + " vs " + setup.abs_discriminant.get_str()});
  r.text += std::string("tamagawa bookkeeping: prod d(F_v) = ") + disc_product.get_str() +
            (tamagawa_ok ? " = " : " != ") + "|D_F| = " + setup.abs_discriminant.get_str() + "\n";
  const auto verdict = all ? adelic::Verdict::equal : adelic::Verdict::not_equal;
  r.text += "verdict: " + adelic::to_string(verdict) + (witness.empty() ? "" : " (" + witness + ")") + "\n";
  r.doc = {{"finite_places", finite},
           {"archimedean", arch},
           {"tamagawa", tamagawa},
           {"verdict", adelic::to_string(verdict)},
           {"detail", witness}};
  r.exit = verdict_exit(verdict);
  return r;
}

void report_error(const Common& c, std::ostream& out, std::ostream& err, ErrorKind kind, const std::string& msg,
                  const std::string& pointer, const json& extra = nullptr) {
  err << "error (" << to_string(kind) << "): " << msg << "\n";
  if (c.format == "json") {
    json e{{"kind", std::string(to_string(kind))}, {"message", msg}};
    if (!pointer.empty()) e["path"] = pointer;
    if (!extra.is_null()) e["best"] = extra;
    out << json{{"error", e}}.dump(2) << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Common c;
  CLI::App app{"Exact measure computations for inner forms of GL(n)", "jlm"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_flag("--numeric", c.numeric, "evaluate exact results numerically");
  app.add_option("--digits", c.digits, "significant digits for --numeric")->check(CLI::Range(1, 250));
  app.add_option("--prime-cap", c.prime_cap, "largest prime used in Euler tails (env JLM_PRIME_CAP)")
      ->check(CLI::Range(2L, 4000000000L));
  app.add_option("--input", c.input, "JSON input file");

  SpecFlags spec_flags;
  std::string normalization = "multiplicative";
  std::string convention = "nd";
  long m = 1, e = 1, k = 1, max_nd = 12;
  std::string q = "symbolic", constant, target = "real", omega, group = "gl2", blocks;
  std::string covol = "pi/3", degree, k_text, k_range, sign = "+", t_list, t_grid;

  auto* volume = app.add_subcommand("volume", "volume of the maximal compact subgroup");
  add_spec_flags(volume, spec_flags);
  volume->add_option("--normalization", normalization)->check(CLI::IsMember({"multiplicative", "tamagawa"}));
  auto* disc = app.add_subcommand("disc-norm", "norm of the discriminant of the maximal order");
  add_spec_flags(disc, spec_flags);
  auto* stein = app.add_subcommand("steinberg", "Steinberg formal degree of GL(m, D), D of index e");
  stein->add_option("--m", m)->required();
  stein->add_option("--e", e);
  stein->add_option("--q", q);
  stein->add_option("--constant", constant, "override the constant 1/(m*e)");
  auto* ratio = app.add_subcommand("ratio", "local Plancherel density ratio");
  add_spec_flags(ratio, spec_flags);
  ratio->add_option("--convention", convention, "Steinberg constant: nd, n or nv");
  auto* archdeg = app.add_subcommand("arch-degree", "archimedean formal degree");
  archdeg->add_option("--k", k)->required();
  archdeg->add_option("--target", target);
  archdeg->add_option("--omega", omega);
  archdeg->add_option("--group", group, "gl2 (H_k / V_k) or sl2 (pi_k)");
  auto* jl = app.add_subcommand("jl-real", "real Jacquet-Langlands map on tempered parameters");
  jl->add_option("--blocks", blocks, "e.g. DS2:3:w1,DS2:5:w2 or DS2:2,CH1:+:0.7");
  auto* cov = app.add_subcommand("covolume", "S-arithmetic covolume from a JSON expression");
  auto* cov_eq = app.add_subcommand("check-covolume-eq", "compare two covolumes");
  auto* gdim = app.add_subcommand("gamma-dim", "von Neumann dimension covolume * formal degree");
  gdim->add_option("--covol", covol);
  gdim->add_option("--degree", degree)->required();
  gdim->add_option("--k", k_text);
  gdim->add_option("--k-range", k_range, "a:b table");
  auto* gden = app.add_subcommand("gamma-density", "Gamma-density of the SL(2,R) principal series");
  gden->add_option("--covol", covol);
  gden->add_option("--sign", sign);
  gden->add_option("--t", t_list, "comma separated t values");
  gden->add_option("--t-grid", t_grid, "start:stop:step");
  auto* vall = app.add_subcommand("verify-all", "run every identity sweep");
  vall->add_option("--max-nd", max_nd);
  auto* vjl = app.add_subcommand("verify-jl", "per-place density preservation report");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (c.prime_cap == 0) {
      if (const char* env = std::getenv("JLM_PRIME_CAP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 2) input_error("JLM_PRIME_CAP must be an integer >= 2");
        c.prime_cap = v;
      }
    }
    Result r;
    if (volume->parsed()) r = cmd_volume(spec_flags, normalization, c);
    else if (disc->parsed()) r = cmd_disc_norm(spec_flags, c);
    else if (stein->parsed()) r = cmd_steinberg(m, e, q, constant, c);
    else if (ratio->parsed()) r = cmd_ratio(spec_flags, convention, c);
    else if (archdeg->parsed()) r = cmd_arch_degree(k, target, omega, group, c);
    else if (jl->parsed()) r = cmd_jl_real(blocks, c);
    else if (cov->parsed()) r = cmd_covolume(c);
    else if (cov_eq->parsed()) r = cmd_check_covolume_eq(c);
    else if (gdim->parsed()) r = cmd_gamma_dim(covol, degree, k_text, k_range, c);
    else if (gden->parsed()) r = cmd_gamma_density(covol, sign, t_list, t_grid, c);
    else if (vall->parsed()) r = cmd_verify_all(max_nd, c);
    else if (vjl->parsed()) r = cmd_verify_jl(c);
    emit(r, c, out);
    return r.exit;
  } catch (const InputError& ie) {
    report_error(c, out, err, ie.kind(), ie.what(), ie.pointer());
  } catch (const adelic::TruncationError& te) {
    report_error(c, out, err, te.kind(), te.what(), "", json_io::to_json(te.best(), c.digits));
  } catch (const Error& er) {
    report_error(c, out, err, er.kind(), er.what(), "");
  } catch (const std::exception& ex) {
    report_error(c, out, err, ErrorKind::input, ex.what(), "");
  }
  return kInputError;
}

}  // namespace jlm::cli
