#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace qtopo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitComputation = 3;

// Runs one invocation. `args` excludes the program name. Results go to `out`
// (or the --out file), error records to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Decimal radians or a rational multiple of pi: "pi", "-pi/2", "2pi/5",
// "0.25*pi". Throws qtopo::Error(InvalidArgument).
double parse_angle(std::string_view text);

// Locale-independent decimal. Throws qtopo::Error(InvalidArgument).
double parse_number(std::string_view text);

// 17 significant digits, '.' separator; non-finite values become "nan",
// "inf" or "-inf".
std::string format_double(double value);

// Compact JSON with every floating value printed by format_double (non-finite
// values as null), keys in insertion order of the underlying object.
std::string dump_json(const nlohmann::ordered_json& value);

}  // namespace qtopo::cli
