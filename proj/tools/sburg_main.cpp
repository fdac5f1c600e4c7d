// sburg: spectral Galerkin simulator and verification suite for the
// stochastic Burgers equation on the torus driven by subordinated
// cylindrical Brownian noise.
//
// usage: sburg <subcommand> <config-file> [key=value ...]
//
// subcommands: simulate, ensemble, picard, verify-subordinator,
//              verify-convolution, verify-picard, gradient-check, ergodicity
//
// exit codes: 0 all checks pass, 1 check failure, 2 configuration error,
//             3 blow-up beyond the censoring budget
#include <cstdio>
#include <iostream>
#include <string>

#include "sburg/errors.hpp"
#include "sburg/suites.hpp"

namespace {

void usage() {
    std::fprintf(stderr,
                 "usage: sburg <subcommand> <config-file> [key=value ...]\n"
                 "subcommands: simulate ensemble picard verify-subordinator\n"
                 "             verify-convolution verify-picard gradient-check ergodicity\n");
}

} // namespace

int main(int argc, char** argv) {
    using namespace sburg;
    if (argc < 3) {
        usage();
        return 2;
    }
    const std::string subcmd = argv[1];
    const std::string config_path = argv[2];
    try {
        std::string text = read_text_file(config_path);
        for (int i = 3; i < argc; ++i) text += std::string("\n") + argv[i] + "\n";
        const SimConfig cfg = parse_config(text, suite_requires_ergodic_regime(subcmd));
        const SuiteOutput out = run_suite(subcmd, cfg);
        write_suite_output(cfg, subcmd, out);
        for (const auto& c : out.checks)
            std::printf("%-48s %s\n", c.name.c_str(), c.pass ? "pass" : "FAIL");
        std::printf("%s: %s (outputs in %s)\n", subcmd.c_str(), out.pass ? "pass" : "FAIL",
                    cfg.output_path.c_str());
        if (out.censor_budget_exceeded) return 3;
        return out.pass ? 0 : 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const BlowUpError& e) {
        std::fprintf(stderr, "blow-up: %s (last finite t = %g)\n", e.what(), e.t_last_finite);
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
