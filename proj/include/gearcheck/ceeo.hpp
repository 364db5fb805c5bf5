#pragma once

#include "gearcheck/signal.hpp"

#include <string_view>

namespace gearcheck {

enum class OperatorKind { RawPassthrough, EnergyOperator, Ceeo };

// CLI spellings: raw, eo, ceeo.
std::string_view to_string(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view text);

// Classic Teager energy operator, out(k) = x(k+1)^2 - x(k) x(k+2).
// Output has N-2 samples; out(k) is aligned with input index k+1.
Signal energy_operator(const Signal& signal);

// Calculus enhanced energy operator, out(k) = x(k+2)^2 - x(k) x(k+4).
// Output has N-4 samples; out(k) is aligned with input index k+2. Negative
// values are kept.
Signal ceeo(const Signal& signal);

Signal preprocess(const Signal& signal, OperatorKind kind);

} // namespace gearcheck
