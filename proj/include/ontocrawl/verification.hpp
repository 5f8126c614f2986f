#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontocrawl/oracle.hpp"

namespace ontocrawl {

enum class VerifyStep { instance, part, under_seed, under_parent, rename };
enum class Outcome { accepted, accepted_renamed, rejected };
enum class RejectReason { instance, part, not_under_seed, not_under_parent, rename_failed };

std::string_view to_string(VerifyStep step);
std::string_view to_string(Outcome outcome);
std::string_view to_string(RejectReason reason);

struct TranscriptEntry {
  VerifyStep step;
  std::string subject;
  // "yes"/"no" for checks, the proposed name (or empty) for a rename.
  std::string answer;
  bool inconclusive = false;
};

struct Verdict {
  Outcome outcome = Outcome::rejected;
  // Set for accepted_renamed.
  std::optional<std::string> new_name;
  // Set for rejected.
  std::optional<RejectReason> reason;
  std::vector<TranscriptEntry> transcript;

  bool accepted() const noexcept { return outcome != Outcome::rejected; }
  // Name under which an accepted candidate enters the hierarchy.
  const std::string& final_name(const std::string& original) const {
    return new_name ? *new_name : original;
  }
  nlohmann::json transcript_json() const;
};

// Checks that `d` is a genuine subconcept of `c`: not an instance, not a
// part, below the seed, below `c`. A failure of the last two earns one
// renaming from d's description and a second pass on the new name.
//
// `ctx` must carry the seed name and the known descriptions; its phase tag
// is replaced by "verify".
Verdict verify(Oracle& oracle, const OracleContext& ctx, const std::string& d,
               const std::string& c);

// One line of the rejection log.
nlohmann::json rejection_record(const std::string& name, const std::string& parent,
                                const Verdict& verdict);

}  // namespace ontocrawl
