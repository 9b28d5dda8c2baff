#pragma once

#include <stdexcept>
#include <string>

namespace yoccoz {

// Typed failure carried across the library. `code` is a stable kebab-case
// tag that the CLI copies verbatim into its JSON error object.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace yoccoz
