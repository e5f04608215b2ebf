#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arsim {

class ExprError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Integer arithmetic over named variables: + - * parentheses, unary minus,
/// and implicit multiplication ("2f", "3(tau-1)").
std::int64_t eval_expr(std::string_view text, const std::map<std::string, std::int64_t>& vars);

}  // namespace arsim
