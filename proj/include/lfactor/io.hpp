#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lfactor/arch_gamma.hpp"
#include "lfactor/basic_function.hpp"
#include "lfactor/characters.hpp"
#include "lfactor/functions.hpp"
#include "lfactor/kernel_hankel.hpp"
#include "lfactor/numerics.hpp"
#include "lfactor/zeta_gamma.hpp"

namespace lfactor {

using Json = nlohmann::json;

/// Bad input: unreadable file, schema violation, or a value the model rejects.
/// `code` is a stable machine-readable reason.
class InputError : public std::runtime_error {
 public:
  InputError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Schema documents from schemas/, compiled into the library.
const Json& schema(const std::string& name);
std::vector<std::string> schema_names();
/// Violations of the supported JSON Schema subset (type, const, enum, required,
/// properties, additionalProperties, items, minItems, maxItems, minimum, maximum,
/// oneOf, local $ref); empty when the document conforms.
std::vector<std::string> validate(const Json& doc, const Json& schema);
/// Throws InputError("schema_violation") listing the first few violations.
void require_valid(const Json& doc, const std::string& schema_name);

/// A file path, or inline JSON when the argument starts with '{' or '['.
Json load_json(const std::string& path_or_inline);

Json to_json(Scalar z);
Scalar scalar_from_json(const Json& j);

Json to_json(const RationalFunc& r);
RationalFunc rf_from_json(const Json& j);

Json to_json(const MultChar& chi);
MultChar char_from_json(const Json& j);

Json to_json(const StepFunction& f);
Json to_json(const MultStepFunction& f);
using AnyFunction = std::variant<StepFunction, MultStepFunction>;
AnyFunction function_from_json(const Json& j);

struct SatakeSpec {
  int p;
  std::vector<Scalar> alpha;
};
Json to_json(const SatakeSpec& s);
SatakeSpec satake_from_json(const Json& j);

struct MatrixSpec {
  int p;
  QMatrix g;
};
MatrixSpec matrix_from_json(const Json& j);
Json to_json(const MatrixSpec& m);

ArchChar arch_char_from_json(const Json& j, Place place);
std::vector<Scalar> samples_from_json(const Json& j);

Json to_json(const GammaReport& r);
Json to_json(const FeReport& r);
Json to_json(const HankelComparison& r);
Json to_json(const LemmaReport& r);
Json to_json(const StabilityReport& r);
Json to_json(const HomogeneousReport& r);
Json to_json(const BasicZetaReport& r);
Json to_json(const BasicFourierReport& r);
Json to_json(const ArchFeReport& r);

/// Shell-value table: header "m,rep,re,im", one row per stored coset p^m rep (1 + p^K Z_p).
std::string shell_table_csv(const MultStepFunction& f);

}  // namespace lfactor
