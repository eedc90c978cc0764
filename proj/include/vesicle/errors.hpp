#pragma once

#include <stdexcept>
#include <string>

namespace vesicle {

// invalid user input: bad config keys, missing values, inconsistent presets
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// runtime numerical failure: singular solve, projection not converged, geometry collapse
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vesicle
