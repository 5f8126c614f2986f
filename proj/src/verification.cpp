#include "ontocrawl/verification.hpp"

#include <spdlog/spdlog.h>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/names.hpp"

namespace ontocrawl {

std::string_view to_string(VerifyStep step) {
  switch (step) {
    case VerifyStep::instance: return "instance";
    case VerifyStep::part: return "part";
    case VerifyStep::under_seed: return "under_seed";
    case VerifyStep::under_parent: return "under_parent";
    case VerifyStep::rename: return "rename";
  }
  return "?";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::accepted: return "accepted";
    case Outcome::accepted_renamed: return "accepted_renamed";
    case Outcome::rejected: return "rejected";
  }
  return "?";
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::instance: return "instance";
    case RejectReason::part: return "part";
    case RejectReason::not_under_seed: return "not_under_seed";
    case RejectReason::not_under_parent: return "not_under_parent";
    case RejectReason::rename_failed: return "rename_failed";
  }
  return "?";
}

nlohmann::json Verdict::transcript_json() const {
  auto out = nlohmann::json::array();
  for (const auto& e : transcript) {
    nlohmann::json entry{{"step", to_string(e.step)},
                         {"subject", e.subject},
                         {"answer", e.answer}};
    if (e.inconclusive) entry["inconclusive"] = true;
    out.push_back(std::move(entry));
  }
  return out;
}

namespace {

RejectReason reason_for(VerifyStep step) {
  switch (step) {
    case VerifyStep::instance: return RejectReason::instance;
    case VerifyStep::part: return RejectReason::part;
    case VerifyStep::under_seed: return RejectReason::not_under_seed;
    case VerifyStep::under_parent: return RejectReason::not_under_parent;
    case VerifyStep::rename: return RejectReason::rename_failed;
  }
  return RejectReason::rename_failed;
}

class Run {
 public:
  Run(Oracle& oracle, OracleContext ctx, const std::string& c)
      : oracle_(oracle), ctx_(std::move(ctx)), c_(c) {
    ctx_.phase = "verify";
  }

  // First failing step, or nothing when all four pass.
  std::optional<VerifyStep> checks(const std::string& d) {
    if (!check(VerifyStep::instance, d, false,
               [&] { return oracle_.is_instance(ctx_, d); }))
      return VerifyStep::instance;
    if (!check(VerifyStep::part, d, false, [&] { return oracle_.is_part(ctx_, d); }))
      return VerifyStep::part;
    if (!check(VerifyStep::under_seed, d, true,
               [&] { return oracle_.under_seed(ctx_, d); }))
      return VerifyStep::under_seed;
    if (!check(VerifyStep::under_parent, d, true,
               [&] { return oracle_.is_subcategory_of(ctx_, d, c_); }))
      return VerifyStep::under_parent;
    return std::nullopt;
  }

  std::optional<std::string> rename(const std::string& d) {
    const auto* desc = ctx_.description_for(d);
    std::optional<std::string> proposed;
    bool inconclusive = false;
    if (desc && !desc->empty()) {
      try {
        proposed = oracle_.rename_from_description(ctx_, c_, *desc);
      } catch (const Error& e) {
        spdlog::warn("rename of {} failed: {}", d, e.what());
        inconclusive = true;
      }
    }
    verdict.transcript.push_back(
        {VerifyStep::rename, d, proposed.value_or(""), inconclusive});
    if (!proposed || is_blank(*proposed) || same_name(*proposed, d)) return std::nullopt;
    // The new name inherits the description that produced it.
    if (!ctx_.description_for(*proposed)) ctx_.add_description(*proposed, *desc);
    return trim(*proposed);
  }

  Verdict verdict;

 private:
  // `wanted` is the answer that lets the candidate through.
  template <class Ask>
  bool check(VerifyStep step, const std::string& d, bool wanted, Ask ask) {
    try {
      const bool answer = ask();
      verdict.transcript.push_back({step, d, answer ? "yes" : "no", false});
      return answer == wanted;
    } catch (const Error& e) {
      spdlog::warn("verification of {} under {} inconclusive at {}: {}", d, c_,
                   to_string(step), e.what());
      verdict.transcript.push_back({step, d, "", true});
      return false;
    }
  }

  Oracle& oracle_;
  OracleContext ctx_;
  std::string c_;
};

}  // namespace

Verdict verify(Oracle& oracle, const OracleContext& ctx, const std::string& d,
               const std::string& c) {
  if (is_blank(d)) throw InvalidInputError("candidate name is empty");
  Run run(oracle, ctx, c);
  auto failed = run.checks(d);
  if (failed && (*failed == VerifyStep::under_seed || *failed == VerifyStep::under_parent)) {
    auto renamed = run.rename(d);
    if (!renamed) {
      failed = VerifyStep::rename;
    } else {
      failed = run.checks(*renamed);
      if (!failed) {
        run.verdict.outcome = Outcome::accepted_renamed;
        run.verdict.new_name = *renamed;
        return std::move(run.verdict);
      }
    }
  }
  if (failed) {
    run.verdict.outcome = Outcome::rejected;
    run.verdict.reason = reason_for(*failed);
  } else {
    run.verdict.outcome = Outcome::accepted;
  }
  return std::move(run.verdict);
}

nlohmann::json rejection_record(const std::string& name, const std::string& parent,
                                const Verdict& verdict) {
  return {{"name", name},
          {"parent", parent},
          {"reason", verdict.reason ? std::string(to_string(*verdict.reason)) : ""},
          {"transcript", verdict.transcript_json()}};
}

}  // namespace ontocrawl
