#pragma once

#include <string>
#include <string_view>

#include "badcantor/cantor.hpp"

namespace badcantor {

/// Sectioned text: [header] [problem] [constants] [chain] [point] [ledger] [windows] [floor], then [report] when set.
std::string serialize_certificate(const Certificate& cert);
Certificate parse_certificate(std::string_view text);

Certificate load_certificate(const std::string& path);
void save_certificate(const Certificate& cert, const std::string& path);

/// 40 significant digits.
std::string decimal_string(const Rational& x);

}  // namespace badcantor
