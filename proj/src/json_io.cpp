#include "jlm/json_io.hpp"

#include <cmath>

namespace jlm::json_io {

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

const char* type_name(const json& j) { return j.type_name(); }

template <typename F>
auto wrap(const Node& node, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    node.fail(e.what());
  }
}

}  // namespace

bool Node::has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

void Node::require_object() const {
  if (!j_->is_object()) fail(std::string("expected an object, got ") + type_name(*j_));
}

Node Node::operator[](const std::string& key) const {
  require_object();
  auto it = j_->find(key);
  if (it == j_->end()) fail("missing required member \"" + key + "\"");
  return Node(*it, ptr_ + "/" + escape_token(key));
}

Node Node::operator[](std::size_t i) const {
  if (!j_->is_array() || i >= j_->size()) fail("index " + std::to_string(i) + " out of range");
  return Node((*j_)[i], ptr_ + "/" + std::to_string(i));
}

std::optional<Node> Node::get(const std::string& key) const {
  require_object();
  auto it = j_->find(key);
  if (it == j_->end() || it->is_null()) return std::nullopt;
  return Node(*it, ptr_ + "/" + escape_token(key));
}

std::size_t Node::size() const {
  if (!j_->is_array()) fail(std::string("expected an array, got ") + type_name(*j_));
  return j_->size();
}

long Node::as_long() const {
  if (!j_->is_number_integer()) fail(std::string("expected an integer, got ") + type_name(*j_));
  return j_->get<long>();
}

double Node::as_double() const {
  if (!j_->is_number()) fail(std::string("expected a number, got ") + type_name(*j_));
  return j_->get<double>();
}

bool Node::as_bool() const {
  if (!j_->is_boolean()) fail(std::string("expected a boolean, got ") + type_name(*j_));
  return j_->get<bool>();
}

std::string Node::as_string() const {
  if (!j_->is_string()) fail(std::string("expected a string, got ") + type_name(*j_));
  return j_->get<std::string>();
}

mpz_class Node::as_mpz() const {
  if (j_->is_number_integer()) return mpz_class(std::to_string(j_->get<long long>()));
  if (j_->is_string()) {
    mpz_class z;
    const auto s = j_->get<std::string>();
    if (s.empty() || z.set_str(s, 10) != 0) fail("expected an integer string, got \"" + s + "\"");
    return z;
  }
  fail(std::string("expected an integer, got ") + type_name(*j_));
}

mpq_class Node::as_rational() const {
  if (j_->is_number_integer()) return mpq_class(as_mpz());
  if (j_->is_string()) return wrap(*this, [&] { return symexpr::parse_rational(j_->get<std::string>()); });
  fail(std::string("expected a rational (integer or string such as \"3/4\"), got ") + type_name(*j_));
}

symexpr::SymbolicScalar Node::as_scalar() const {
  if (j_->is_number_integer()) return symexpr::SymbolicScalar(mpq_class(as_mpz()));
  if (j_->is_string()) return wrap(*this, [&] { return symexpr::parse_scalar(j_->get<std::string>()); });
  fail(std::string("expected a scalar expression string, got ") + type_name(*j_));
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("", std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

json to_json(const localgeom::LocalAlgebraSpec& spec) {
  json j;
  j["q"] = spec.q ? json(spec.q->get_str()) : json("symbolic");
  j["local_disc_norm"] = spec.local_disc_norm.get_str();
  j["n"] = spec.n;
  j["d"] = spec.d;
  j["n_v"] = spec.n_v;
  j["d_v"] = spec.d_v;
  return j;
}

localgeom::LocalAlgebraSpec local_spec_from_json(const Node& node) {
  node.require_object();
  localgeom::LocalAlgebraSpec s;
  if (auto q = node.get("q")) {
    if (!(q->raw().is_string() && q->raw().get<std::string>() == "symbolic")) s.q = q->as_mpz();
  }
  if (auto dn = node.get("local_disc_norm")) s.local_disc_norm = dn->as_mpz();
  s.n = node["n"].as_long();
  s.d = node["d"].as_long();
  s.d_v = node.get("d_v") ? node["d_v"].as_long() : 1;
  if (auto nv = node.get("n_v")) {
    s.n_v = nv->as_long();
  } else {
    if (s.d_v < 1 || (s.n * s.d) % s.d_v != 0) node["d_v"].fail("d_v must divide n*d");
    s.n_v = s.n * s.d / s.d_v;
  }
  wrap(node, [&] {
    s.validate();
    return 0;
  });
  return s;
}

// ---------------------------------------------------------------------------

json to_json(const plancherel::ArchTemperedParam& param) {
  json blocks = json::array();
  for (const auto& b : param.blocks()) {
    if (const auto* ds = std::get_if<plancherel::DiscreteSeriesBlock>(&b)) {
      blocks.push_back({{"type", "DS2"}, {"k", ds->k}, {"omega", ds->central_character}});
    } else {
      const auto& ch = std::get<plancherel::CharacterBlock>(b);
      blocks.push_back({{"type", "CH1"}, {"sign", ch.sign > 0 ? "+" : "-"}, {"t", ch.t}, {"label", ch.label}});
    }
  }
  return {{"target", plancherel::to_string(param.target())}, {"blocks", blocks}};
}

json to_json(const std::optional<plancherel::ArchTemperedParam>& param) {
  if (!param) return {{"zero", true}};
  return to_json(*param);
}

plancherel::ArchTemperedParam arch_param_from_json(const Node& node) {
  node.require_object();
  auto target = plancherel::ArchTarget::real_group;
  if (auto t = node.get("target")) {
    const auto s = t->as_string();
    if (s == "real_group") target = plancherel::ArchTarget::real_group;
    else if (s == "quaternionic_group") target = plancherel::ArchTarget::quaternionic_group;
    else t->fail("target must be \"real_group\" or \"quaternionic_group\"");
  }
  const Node blocks = node["blocks"];
  std::vector<plancherel::ArchBlock> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Node b = blocks[i];
    const auto type = b["type"].as_string();
    if (type == "DS2") {
      out.push_back(plancherel::DiscreteSeriesBlock{b["k"].as_long(), b.get("omega") ? b["omega"].as_string() : ""});
    } else if (type == "CH1") {
      const auto sign = b["sign"].as_string();
      if (sign != "+" && sign != "-") b["sign"].fail("sign must be \"+\" or \"-\"");
      out.push_back(plancherel::CharacterBlock{sign == "+" ? 1 : -1, b["t"].as_double(),
                                               b.get("label") ? b["label"].as_string() : ""});
    } else {
      b["type"].fail("block type must be \"DS2\" or \"CH1\"");
    }
  }
  return wrap(node, [&] { return plancherel::ArchTemperedParam(target, std::move(out)); });
}

// ---------------------------------------------------------------------------

json to_json(const adelic::TailRule& rule) {
  if (rule.is_one()) return {{"rule", "one"}};
  auto term = [](const adelic::TailTerm& t) {
    return json{{"rule", "one_minus_q_pow"}, {"exponent", t.exponent}, {"invert", t.invert}};
  };
  if (rule.terms().size() == 1) return term(rule.terms().front());
  json factors = json::array();
  for (const auto& t : rule.terms()) factors.push_back(term(t));
  return {{"rule", "product"}, {"factors", factors}};
}

adelic::TailRule tail_rule_from_json(const Node& node) {
  const auto kind = node["rule"].as_string();
  if (kind == "one") return adelic::TailRule::one();
  if (kind == "one_minus_q_pow") {
    const bool invert = node.get("invert") ? node["invert"].as_bool() : false;
    return adelic::TailRule::one_minus_q_pow(node["exponent"].as_long(), invert);
  }
  if (kind == "product") {
    const Node factors = node["factors"];
    adelic::TailRule out;
    for (std::size_t i = 0; i < factors.size(); ++i) out *= tail_rule_from_json(factors[i]);
    return out;
  }
  node["rule"].fail("unknown tail rule \"" + kind + "\" (expected one, one_minus_q_pow or product)");
}

// ---------------------------------------------------------------------------

json to_json(const adelic::GlobalSetup& setup) {
  json places = json::array();
  for (const auto& p : setup.places) {
    json j{{"name", p.name}, {"q", p.q.get_str()}};
    if (p.local_disc_norm) j["local_disc_norm"] = p.local_disc_norm->get_str();
    places.push_back(j);
  }
  return {{"abs_discriminant", setup.abs_discriminant.get_str()},
          {"r1", setup.r1},
          {"r2", setup.r2},
          {"torsion_order", setup.torsion_order},
          {"places", places},
          {"ram_set", setup.ram_set},
          {"S", setup.S}};
}

adelic::GlobalSetup setup_from_json(const Node& node) {
  node.require_object();
  adelic::GlobalSetup s;
  if (auto v = node.get("abs_discriminant")) s.abs_discriminant = v->as_mpz();
  if (auto v = node.get("r1")) s.r1 = v->as_long();
  if (auto v = node.get("r2")) s.r2 = v->as_long();
  if (auto v = node.get("torsion_order")) s.torsion_order = v->as_long();
  if (auto places = node.get("places")) {
    for (std::size_t i = 0; i < places->size(); ++i) {
      const Node p = (*places)[i];
      adelic::FinitePlace fp{p["name"].as_string(), p["q"].as_mpz(), std::nullopt};
      if (auto dn = p.get("local_disc_norm")) fp.local_disc_norm = dn->as_mpz();
      s.places.push_back(std::move(fp));
    }
  }
  auto names = [&](const char* key, std::set<std::string>& into) {
    if (auto arr = node.get(key)) {
      for (std::size_t i = 0; i < arr->size(); ++i) into.insert((*arr)[i].as_string());
    }
  };
  names("ram_set", s.ram_set);
  names("S", s.S);
  wrap(node, [&] {
    s.validate();
    return 0;
  });
  return s;
}

// ---------------------------------------------------------------------------

json to_json(const adelic::CovolumeExpr& expr) {
  json factors = json::object();
  for (const auto& [place, f] : expr.finite_factors) {
    json j{{"value", f.value.to_string()}};
    if (f.q) j["q"] = f.q->get_str();
    factors[place] = j;
  }
  json j{{"disc_base", expr.disc_base.get_str()},
         {"half_exponent", expr.half_exponent},
         {"tamagawa_number", expr.tamagawa_number.get_str()},
         {"finite_factors", factors}};
  if (expr.tail) {
    j["tail"] = {{"rule", to_json(expr.tail->rule)},
                 {"tolerance", expr.tail->tolerance},
                 {"prime_cap", expr.tail->prime_cap},
                 {"excluded_primes", expr.tail->excluded_primes}};
  }
  return j;
}

adelic::CovolumeExpr covolume_expr_from_json(const Node& node) {
  node.require_object();
  adelic::CovolumeExpr e;
  if (auto v = node.get("disc_base")) e.disc_base = v->as_mpz();
  if (auto v = node.get("half_exponent")) e.half_exponent = v->as_long();
  if (auto v = node.get("tamagawa_number")) e.tamagawa_number = v->as_rational();
  if (auto factors = node.get("finite_factors")) {
    factors->require_object();
    for (const auto& [place, _] : factors->raw().items()) {
      const Node f = (*factors)[place];
      adelic::LocalFactor lf;
      if (f.raw().is_object()) {
        lf.value = f["value"].as_scalar();
        if (auto q = f.get("q")) lf.q = q->as_mpz();
      } else {
        lf.value = f.as_scalar();
      }
      e.finite_factors.emplace(place, std::move(lf));
    }
  }
  if (auto tail = node.get("tail")) {
    adelic::TailSpec t;
    t.rule = tail_rule_from_json((*tail)["rule"]);
    if (auto v = tail->get("tolerance")) {
      t.tolerance = v->as_double();
      if (!(t.tolerance > 0.0)) v->fail("tolerance must be positive");
    }
    if (auto v = tail->get("prime_cap")) {
      const long cap = v->as_long();
      if (cap < 2 || cap > 4000000000L) v->fail("prime_cap must lie in [2, 4e9]");
      t.prime_cap = static_cast<std::uint32_t>(cap);
    }
    if (auto ex = tail->get("excluded_primes")) {
      for (std::size_t i = 0; i < ex->size(); ++i) {
        const long p = (*ex)[i].as_long();
        if (p < 2) (*ex)[i].fail("excluded prime must be >= 2");
        t.excluded_primes.insert(static_cast<std::uint32_t>(p));
      }
    }
    e.tail = std::move(t);
  }
  wrap(node, [&] {
    e.validate();
    return 0;
  });
  return e;
}

// ---------------------------------------------------------------------------

json to_json(const adelic::IndexData& index) {
  return {{"fs_index", index.fs_index.get_str()},
          {"os_index", index.os_index.get_str()},
          {"mu_fs_order", index.mu_fs_order.get_str()},
          {"mu_os_order", index.mu_os_order.get_str()}};
}

adelic::IndexData index_from_json(const Node& node, const adelic::GlobalSetup& setup) {
  node.require_object();
  if (node.has("kinds")) {
    const long n = node["n"].as_long();
    if (n < 1) node["n"].fail("n must be positive");
    const Node kinds = node["kinds"];
    kinds.require_object();
    std::map<std::string, adelic::PlaceKind> out;
    for (const auto& [place, _] : kinds.raw().items()) {
      const Node k = kinds[place];
      const auto kind = k["kind"].as_string();
      if (kind == "real") {
        out.emplace(place, adelic::RealPlaceKind{});
      } else if (kind == "complex") {
        out.emplace(place, adelic::ComplexPlaceKind{});
      } else if (kind == "padic") {
        out.emplace(place, adelic::PadicPlaceKind{k["q"].as_mpz(), k["residue_char"].as_mpz(),
                                                  k["mu_n_order"].as_long(), k["val_n"].as_mpz()});
      } else {
        k["kind"].fail("kind must be real, complex or padic");
      }
    }
    return wrap(node, [&] { return adelic::index_data_from_setup(setup, n, out); });
  }
  adelic::IndexData d;
  if (auto v = node.get("fs_index")) d.fs_index = v->as_mpz();
  if (auto v = node.get("os_index")) d.os_index = v->as_mpz();
  if (auto v = node.get("mu_fs_order")) d.mu_fs_order = v->as_mpz();
  if (auto v = node.get("mu_os_order")) d.mu_os_order = v->as_mpz();
  wrap(node, [&] {
    d.validate();
    return 0;
  });
  return d;
}

json to_json(const symexpr::NumericValue& v, int digits) {
  json j{{"value", v.to_string(digits)}, {"exact", v.exact}, {"error_bound", v.error_bound}};
  if (v.exact) j["rational"] = v.value.get_str();
  return j;
}

}  // namespace jlm::json_io
