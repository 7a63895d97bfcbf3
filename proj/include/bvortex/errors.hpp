#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bvortex {

enum class ErrorKind {
    parameter,
    capability,
    geometry,
    diagonal,
    corner,
    convergence,
    rank,
    numerical,
    truncation,
    insufficient,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::capability: return "capability";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::diagonal: return "diagonal";
    case ErrorKind::corner: return "corner";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::rank: return "rank";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::insufficient: return "insufficient";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Carries the residual history (Newton) or the achieved tolerance (quadrature).
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> history, double achieved)
        : Error(ErrorKind::convergence, what), history_(std::move(history)), achieved_(achieved) {}
    const std::vector<double>& history() const noexcept { return history_; }
    double achieved() const noexcept { return achieved_; }

private:
    std::vector<double> history_;
    double achieved_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) throw Error(kind, what);
}

}  // namespace bvortex
