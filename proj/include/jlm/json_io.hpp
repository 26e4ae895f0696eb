#pragma once

// JSON forms of the library's input and output types. Readers report schema
// violations as InputError with a JSON pointer to the offending value.

#include <optional>
#include <string>

#include "json.hpp"

#include "jlm/adelic.hpp"
#include "jlm/localgeom.hpp"
#include "jlm/plancherel.hpp"

namespace jlm::json_io {

using json = nlohmann::json;

class InputError : public Error {
 public:
  InputError(std::string pointer, const std::string& msg)
      : Error(ErrorKind::input, (pointer.empty() ? std::string("/") : pointer) + ": " + msg),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// A JSON value together with its location in the input document.
class Node {
 public:
  Node(const json& j, std::string pointer = "") : j_(&j), ptr_(std::move(pointer)) {}

  const json& raw() const { return *j_; }
  const std::string& pointer() const { return ptr_; }
  bool has(const std::string& key) const;
  Node operator[](const std::string& key) const;  ///< required member
  Node operator[](std::size_t i) const;
  std::optional<Node> get(const std::string& key) const;
  std::size_t size() const;  ///< array length; throws unless an array
  void require_object() const;

  long as_long() const;
  double as_double() const;
  bool as_bool() const;
  std::string as_string() const;
  mpz_class as_mpz() const;        ///< integer or decimal-integer string
  mpq_class as_rational() const;   ///< integer or string such as "3/4"
  symexpr::SymbolicScalar as_scalar() const;

  [[noreturn]] void fail(const std::string& msg) const { throw InputError(ptr_, msg); }

 private:
  const json* j_;
  std::string ptr_;
};

/// Parse text as JSON; syntax errors become InputError at the root.
json parse_document(const std::string& text);

json to_json(const localgeom::LocalAlgebraSpec& spec);
localgeom::LocalAlgebraSpec local_spec_from_json(const Node& node);

json to_json(const plancherel::ArchTemperedParam& param);
/// Missing "target" means real_group.
plancherel::ArchTemperedParam arch_param_from_json(const Node& node);
/// {"zero": true} for the absent element.
json to_json(const std::optional<plancherel::ArchTemperedParam>& param);

json to_json(const adelic::TailRule& rule);
adelic::TailRule tail_rule_from_json(const Node& node);

json to_json(const adelic::GlobalSetup& setup);
adelic::GlobalSetup setup_from_json(const Node& node);

json to_json(const adelic::CovolumeExpr& expr);
adelic::CovolumeExpr covolume_expr_from_json(const Node& node);

json to_json(const adelic::IndexData& index);
/// Either explicit orders or {"n": .., "kinds": {place: {...}}} resolved
/// against the setup.
adelic::IndexData index_from_json(const Node& node, const adelic::GlobalSetup& setup);

json to_json(const symexpr::NumericValue& v, int digits);

}  // namespace jlm::json_io
