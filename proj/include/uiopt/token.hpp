#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "uiopt/errors.hpp"

namespace uiopt {

// Deterministic stand-in for model tokenizers: maximal runs of letters,
// maximal runs of digits, and every remaining non-whitespace character count
// as one token each; whitespace contributes nothing. Bytes outside ASCII are
// treated as letters so UTF-8 words count as single runs.
inline long default_token_count(std::string_view text) {
    enum class Run { none, letters, digits };
    Run run = Run::none;
    long count = 0;
    for (unsigned char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            run = Run::none;
            continue;
        }
        if (std::isalpha(c) || c >= 0x80) {
            if (run != Run::letters) ++count;
            run = Run::letters;
        } else if (std::isdigit(c)) {
            if (run != Run::digits) ++count;
            run = Run::digits;
        } else {
            ++count;
            run = Run::none;
        }
    }
    return count;
}

struct TokenCounter {
    enum class Scheme { default_deterministic, external };
    Scheme scheme = Scheme::default_deterministic;
    // External contract: text in, non-negative count out. Throwing or
    // returning a negative value is reported as ExternalCounterFailure.
    std::function<long(std::string_view)> external;
};

inline long count_tokens(std::string_view text, const TokenCounter& counter = {}) {
    if (counter.scheme == TokenCounter::Scheme::default_deterministic) {
        return default_token_count(text);
    }
    if (!counter.external) {
        throw Error(Errc::external_counter_failure, "external counter not configured");
    }
    long n;
    try {
        n = counter.external(text);
    } catch (const std::exception& e) {
        throw Error(Errc::external_counter_failure, e.what());
    }
    if (n < 0) {
        throw Error(Errc::external_counter_failure, "external counter returned a negative count");
    }
    return n;
}

}  // namespace uiopt
