#pragma once

#include <stdexcept>
#include <string>

namespace qgv {

struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct NotConvertibleError : std::runtime_error {
    explicit NotConvertibleError(const std::string& what) : std::runtime_error(what) {}
};

struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

struct InternalConsistencyError : std::runtime_error {
    explicit InternalConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qgv
