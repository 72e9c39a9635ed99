#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fraclab/exponents.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab::cli {

using nlohmann::json;

/// Typed access to one JSON object of a run config. Every key read is
/// recorded; finish() rejects the rest. Errors name the full key path.
class Reader {
 public:
  Reader(const json& object, std::string path);

  bool has(std::string_view key) const;
  const json& required(std::string_view key);
  const json* optional(std::string_view key);

  double number(std::string_view key);
  double number(std::string_view key, double fallback);
  long integer(std::string_view key, long min);
  long integer(std::string_view key, long min, long fallback);
  bool boolean(std::string_view key, bool fallback);
  std::string string(std::string_view key);
  std::string string(std::string_view key, std::string fallback);
  std::vector<double> numbers(std::string_view key);
  Reader object(std::string_view key);

  /// Throws ValidationError naming the first unread key.
  void finish() const;
  std::string path(std::string_view key) const;

 private:
  const json& object_;
  std::string path_;
  std::set<std::string, std::less<>> used_;
};

Domain read_domain(Reader domain);

/// Named fields from the optional "definitions" object, parsed in key order;
/// a definition may call those before it.
FieldTable read_definitions(Reader& root);

/// A field given as a number or an expression string.
ExponentField read_field(Reader& r, std::string_view key, Arity arity,
                         const FieldTable& definitions);
/// Same, validated for `role` on `domain`.
ExponentField read_field(Reader& r, std::string_view key, Arity arity,
                         const FieldTable& definitions, const Domain& domain, Role role);

/// Data function f(x) sampled on cells and facets.
GridFunction read_function(Reader& r, std::string_view key, const Domain& domain,
                           const FieldTable& definitions);

Scope read_scope(Reader& r);

}  // namespace fraclab::cli
