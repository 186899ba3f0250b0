#ifndef FAIRAUDIT_ERRORS_HPP
#define FAIRAUDIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fairaudit {

// Error categories map onto the CLI exit-code contract:
//   UsageError -> 1, DataError -> 2, TrainError -> 3.

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class TrainError : public std::runtime_error {
public:
    explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fairaudit

#endif
