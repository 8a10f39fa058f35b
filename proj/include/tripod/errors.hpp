#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tripod {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent scenario (pulse invariants, magnetic overlap, ...).
class ScenarioError : public Error
{
public:
    using Error::Error;
};

class UnitError : public Error
{
public:
    using Error::Error;
};

// Non-finite numbers appeared during time marching.
class DivergenceError : public Error
{
public:
    explicit DivergenceError(const std::string& what)
        : Error(what), tau_(std::nan("")), dt_(std::nan(""))
    {}

    DivergenceError(const std::string& what, double tau, double dt)
        : Error(what + " (tau = " + std::to_string(tau) +
                "/Gamma, dt = " + std::to_string(dt) + "/Gamma)"),
          tau_(tau), dt_(dt)
    {}

    double tau() const { return tau_; }
    double dt() const { return dt_; }

private:
    double tau_;
    double dt_;
};

// Post-processing could not be carried out on the supplied data.
class AnalysisError : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    ConfigError(const std::string& what, std::string key = {}, int line = 0)
        : Error(what), key_(std::move(key)), line_(line)
    {}

    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    std::string key_;
    int line_;
};

} // namespace tripod
