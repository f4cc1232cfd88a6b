#pragma once

// Claim-by-claim verification driver behind `pekr verify`.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace pekr {

enum class FindingStatus { verified, refuted, skipped };
std::string_view to_string(FindingStatus s);

struct Finding {
    std::string claim;
    FindingStatus status = FindingStatus::verified;
    // Asymptotic claims ("for n large enough") never count as refutations.
    bool asymptotic = false;
    nlohmann::json parameters = nlohmann::json::object();
    std::string evidence;
    // Machine-checkable counterexample (family file text or exact values).
    std::optional<std::string> counterexample;
};

struct VerifyConfig {
    std::vector<std::string> claims; // empty = every claim
    std::optional<int> n_min;
    std::optional<int> n_max;
    int t_max = 3;
    std::size_t samples = 1000;
    std::uint64_t seed = 20240601;
    int threads = 1;
    std::chrono::milliseconds timeout{300'000};
};

const std::vector<std::string_view>& known_claims();

// UnknownLemmaError-style Error for an unknown claim id.
std::vector<Finding> cmd_verify(const VerifyConfig& config);

// 0 = everything verified, 2 = only asymptotic claims short of holding,
// 1 = a non-asymptotic refutation.
int verify_exit_code(const std::vector<Finding>& findings);

nlohmann::json findings_json(const std::vector<Finding>& findings);
std::string findings_text(const std::vector<Finding>& findings);

} // namespace pekr
