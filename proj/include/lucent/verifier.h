#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lucent/cp_exhaust.h"
#include "lucent/net.h"
#include "lucent/reachability.h"
#include "lucent/report.h"

namespace lucent {

enum class CheckStatus { passed, failed };

std::string to_string(CheckStatus s);

struct CheckRecord {
	std::string id;
	// The claim this check instantiates.
	std::string anchor;
	CheckStatus status = CheckStatus::passed;
	// Counts on success, the offending data on failure; null when empty.
	Json witness;
	// Set when the check gave up on a cap rather than finding a violation.
	bool indeterminate = false;

	bool passed() const { return status == CheckStatus::passed; }
};

struct VerifierOptions {
	std::size_t state_cap = default_state_cap;
	std::size_t enum_cap = default_enum_cap;
	bool allow_place_free = false;

	CpOptions cp() const { return CpOptions{enum_cap, allow_place_free}; }
};

// Anchor text of a check id; empty for unknown ids.
std::string anchor_of(const std::string &id);

// Checks on a perpetual T-system: perpetuality, the circuit property, token
// free feeding witnesses (checked against exhaustive search), the path
// token bound away from the cluster transition, a replay of the pair
// refutation for every pair of distinct states, and brute-force lucency.
// Throws PreconditionError("not perpetual: ...") or ("not a T-net") before
// any record is produced.
std::vector<CheckRecord> verify_tsystem_lucency(const Net &tnet, const Marking &m0, const Cluster &cl,
						const VerifierOptions &options = {});

// Token counts inside adapted layers over all reachable states: no
// circuits, at most one token per path, shutdown empties the layer, and
// marked paths enable their end without the way-in.
std::vector<CheckRecord> verify_layer_token_counts(const ReachabilityGraph &rg, const CpExhaustion &exh,
						   const VerifierOptions &options = {});

// For every layer, states with enabling-equivalent restrictions have equal
// restrictions and share their shutdown sequences.
std::vector<CheckRecord> verify_marking_equality_on_layers(const ReachabilityGraph &rg, const CpExhaustion &exh,
							   const VerifierOptions &options = {});

// Walks the complement chain: at each level, removing the next layer after
// a shutdown from every reachable state leaves a perpetual system.
std::vector<CheckRecord> verify_perpetuality_chain(const ReachabilityGraph &rg, const CpExhaustion &exh,
						   const Cluster &cl, const VerifierOptions &options = {});

// For every enabling-equivalent pair of host states: common global
// shutdown, the difference identity on the final T-net, and reachability
// plus enabling equivalence of the shut-down restrictions in the final
// T-system.
std::vector<CheckRecord> verify_propagation(const ReachabilityGraph &rg, const CpExhaustion &exh, const Cluster &cl,
					    const VerifierOptions &options = {});

enum class Outcome { lucent_proved, failed, indeterminate };

struct Certificate {
	std::string net_name;
	std::string net_hash;
	std::vector<std::string> cluster;
	// Exhaustion summary, null if the run stopped earlier.
	Json exhaustion;
	std::vector<CheckRecord> checks;
	Outcome outcome = Outcome::failed;
	std::string failed_step;

	// "lucent_proved", "failed(<check id>)" or "indeterminate(<check id>)".
	std::string verdict() const;
};

// Replays the lucency argument on (net, m0) for the regeneration cluster
// cl. Checks run in order and stop at the first failure.
Certificate prove_lucency(const Net &net, const Marking &m0, const Cluster &cl, const VerifierOptions &options = {});

Json to_json(const CheckRecord &record);
Json to_json(const Certificate &cert);
std::string to_text(const Certificate &cert);

// Informational checks of three T-system facts on an arbitrary perpetual
// system: token free feeding of unmarked pre-places, long paths for
// distinct enabling-equivalent pairs, and safeness of paths avoiding the
// cluster. Failures here do not affect any verdict.
std::vector<CheckRecord> concluding_diagnostics(const ReachabilityGraph &rg, const Cluster &cl,
						const VerifierOptions &options = {});

} // namespace lucent
