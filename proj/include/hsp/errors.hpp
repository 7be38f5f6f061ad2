#pragma once

#include <stdexcept>
#include <string>

namespace hsp {

// Exit-code contract: 0 pass, 1 verification failure, 2 usage error,
// 3 resource cap exceeded.
struct HspError : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual int exit_code() const { return 2; }
};

struct NotAGroup : HspError {
    explicit NotAGroup(const std::string& reason)
        : HspError("not a group: " + reason) {}
};

struct UnsupportedGroup : HspError {
    explicit UnsupportedGroup(const std::string& what)
        : HspError("unsupported group: " + what) {}
};

struct NotStrictlyPeriodic : HspError {
    explicit NotStrictlyPeriodic(const std::string& what)
        : HspError("oracle is not strictly periodic: " + what) {}
};

struct VerificationScaleExceeded : HspError {
    explicit VerificationScaleExceeded(const std::string& what)
        : HspError("verification scale exceeded: " + what) {}
    int exit_code() const override { return 3; }
};

struct DenseCapExceeded : HspError {
    explicit DenseCapExceeded(const std::string& what)
        : HspError("dense statevector cap exceeded: " + what) {}
    int exit_code() const override { return 3; }
};

struct TermBudgetExceeded : HspError {
    explicit TermBudgetExceeded(const std::string& what)
        : HspError("term budget exceeded: " + what) {}
    int exit_code() const override { return 3; }
};

struct DegenerateState : HspError {
    explicit DegenerateState(const std::string& what)
        : HspError("degenerate state: " + what) {}
};

}  // namespace hsp
