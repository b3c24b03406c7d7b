// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] = path to the CLI binary (used by the determinism check).
#include <cstdio>

#include "dyadic/verification.hpp"

int main(int argc, char** argv) {
    dyadic::AcceptanceOptions options;
    if (argc >= 2) options.cli_path = argv[1];
    options.threads = 2;
    dyadic::Workspace workspace(options.threads);
    try {
        const int failures = dyadic::run_acceptance_with_output(workspace, options);
        return failures == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
        return 2;
    }
}
