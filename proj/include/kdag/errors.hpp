#ifndef KDAG_ERRORS_HPP
#define KDAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kdag {

// Base for all recoverable toolkit errors. The CLI maps the subtypes to
// exit codes: parameter-class errors -> 2, resource_limit -> 3, io_error -> 4.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

class invalid_parameter : public error {
public:
    explicit invalid_parameter(const std::string& what) : error(what) {}
};

// Operation requires a parameter regime it was not called in
// (e.g. fixed points requested outside the low-mutation regime).
class regime_error : public error {
public:
    explicit regime_error(const std::string& what) : error(what) {}
};

// Parameters are formally valid but make the requested quantity collapse
// (e.g. p = 0 drives the lower fixed point to the boundary).
class degenerate_parameter : public error {
public:
    explicit degenerate_parameter(const std::string& what) : error(what) {}
};

// The requested quantity is not defined for these parameters.
class not_applicable : public error {
public:
    explicit not_applicable(const std::string& what) : error(what) {}
};

class resource_limit : public error {
public:
    explicit resource_limit(const std::string& what) : error(what) {}
};

class io_error : public error {
public:
    explicit io_error(const std::string& what) : error(what) {}
};

// Violation of an internal identity; signals an implementation bug,
// never an input problem.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace kdag

#endif // KDAG_ERRORS_HPP
