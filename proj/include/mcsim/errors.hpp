#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcsim {

class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Waxman generation gave up: too many consecutive disconnected draws.
class ConnectivityExhausted : public SimError {
public:
    using SimError::SimError;
};

/// Degree calibration could not bracket or reach the target.
class CalibrationFailed : public SimError {
public:
    using SimError::SimError;
};

class PathDetached : public SimError {
public:
    using SimError::SimError;
};

class NotAMember : public SimError {
public:
    using SimError::SimError;
};

class NotInTree : public SimError {
public:
    using SimError::SimError;
};

class CoreMissing : public SimError {
public:
    using SimError::SimError;
};

class NoSources : public SimError {
public:
    using SimError::SimError;
};

class IoError : public SimError {
public:
    using SimError::SimError;
};

/// Config or input-file rejection. Collects every offending line so the
/// user sees all problems at once.
class ParseError : public SimError {
public:
    explicit ParseError(std::vector<std::string> issues)
        : SimError(join(issues)), issues_(std::move(issues)) {}
    explicit ParseError(const std::string& single)
        : ParseError(std::vector<std::string>{single}) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& i : v) {
            if (!s.empty()) s += "\n";
            s += i;
        }
        return s;
    }
    std::vector<std::string> issues_;
};

} // namespace mcsim
