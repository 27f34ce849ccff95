#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace normlens {

enum class ErrorCode {
    malformed_input,
    not_found,
    unknown_venue,
    duplicate_id,
    empty_corpus,
    insufficient_communities,
    unknown_community,
    empty_sentence,
    empty_document,
    scorer_unavailable,
    judge_unavailable,
    classifier_unavailable,
    backend_unavailable,
    insufficient_data,
    zero_variance,
    config_mismatch,
    io_error,
};

std::string_view to_string(ErrorCode code);

/// Every failure the library reports carries one of the codes above so that
/// the command line layer can emit a machine-readable error record.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace normlens
