#include "gearcheck/ceeo.hpp"

#include "gearcheck/error.hpp"

#include <string>
#include <vector>

namespace gearcheck {
namespace {

// x(n)^2 - x(n-lag) x(n+lag) over every n with a full window.
Signal symmetric_energy(const Signal& signal, std::size_t lag, const char* name) {
    const auto x = signal.samples();
    if (x.size() < 2 * lag + 1) {
        throw DataError(std::string(name) + ": signal too short (" + std::to_string(x.size()) +
                        " samples, need " + std::to_string(2 * lag + 1) + ")");
    }
    std::vector<double> out(x.size() - 2 * lag);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double centre = x[k + lag];
        out[k] = centre * centre - x[k] * x[k + 2 * lag];
    }
    return signal.with_samples(std::move(out));
}

} // namespace

std::string_view to_string(OperatorKind kind) {
    switch (kind) {
    case OperatorKind::RawPassthrough:
        return "raw";
    case OperatorKind::EnergyOperator:
        return "eo";
    case OperatorKind::Ceeo:
        return "ceeo";
    }
    return "unknown";
}

OperatorKind parse_operator_kind(std::string_view text) {
    if (text == "raw") {
        return OperatorKind::RawPassthrough;
    }
    if (text == "eo") {
        return OperatorKind::EnergyOperator;
    }
    if (text == "ceeo") {
        return OperatorKind::Ceeo;
    }
    throw DataError("unknown preprocessing '" + std::string(text) + "' (expected raw, eo or ceeo)");
}

Signal energy_operator(const Signal& signal) {
    return symmetric_energy(signal, 1, "energy operator");
}

Signal ceeo(const Signal& signal) {
    return symmetric_energy(signal, 2, "ceeo");
}

Signal preprocess(const Signal& signal, OperatorKind kind) {
    switch (kind) {
    case OperatorKind::RawPassthrough:
        return signal;
    case OperatorKind::EnergyOperator:
        return energy_operator(signal);
    case OperatorKind::Ceeo:
        return ceeo(signal);
    }
    throw DataError("unknown operator kind");
}

} // namespace gearcheck
