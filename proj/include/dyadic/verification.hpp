#pragma once

#include <map>
#include <string>
#include <vector>

#include "dyadic/chains.hpp"
#include "dyadic/coupling.hpp"
#include "dyadic/enumeration.hpp"
#include "dyadic/mixing.hpp"
#include "dyadic/spectral.hpp"

namespace dyadic {

/// Shared lazy cache so the expensive artifacts (indices, matrices, k = 4
/// eigen-solves) are built once across criteria.
class Workspace {
  public:
    explicit Workspace(int threads = 2) : threads_(threads) {}

    int threads() const { return threads_; }
    const TilingIndex& index(int k);
    const BlockStructure& blocks(int k);          // 2 <= k <= 4
    const TransitionMatrix& edge_matrix(int k);   // 1 <= k <= 4
    const TransitionMatrix& block_matrix(int k);  // 2 <= k <= 4
    const SpectralReport& edge_gap(int k);
    const SpectralReport& block_gap(int k);

  private:
    int threads_;
    std::map<int, TilingIndex> indices_;
    std::map<int, BlockStructure> blocks_;
    std::map<int, TransitionMatrix> edge_;
    std::map<int, TransitionMatrix> block_;
    std::map<int, SpectralReport> edge_gap_;
    std::map<int, SpectralReport> block_gap_;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0;
};

struct AcceptanceOptions {
    std::string cli_path;  // binary exercised by the determinism criterion
    std::string scratch_dir = "acceptance_tmp";
    int threads = 2;
    std::uint64_t seed = 20220816;
};

/// Runs every acceptance criterion; one result per criterion, in order.
std::vector<CriterionResult> run_acceptance(Workspace& ws, const AcceptanceOptions& options);

/// Convenience: run and print one pass/fail line per criterion to stdout.
/// Returns the number of failures.
int run_acceptance_with_output(Workspace& ws, const AcceptanceOptions& options);

}  // namespace dyadic
