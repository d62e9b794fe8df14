// Compares Alice's expected gain for a handful of strategies at one setting of
// (r, R): the exact value where one is available, and a Monte Carlo estimate.
//
//   cheating_demo [r] [R] [rounds]

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <qgamble/qgamble.hpp>

int main(int argc, char **argv) {
    using namespace qgamble;
    ProtocolParams params;
    std::uint64_t rounds = 200000;
    try {
        if (argc > 1) {
            params.r = std::stod(argv[1]);
        }
        if (argc > 2) {
            params.R = std::stod(argv[2]);
        }
        if (argc > 3) {
            rounds = std::stoull(argv[3]);
        }
        params.validate();
    } catch (const std::exception &e) {
        std::cerr << "usage: cheating_demo [r] [R] [rounds]: " << e.what() << '\n';
        return 1;
    }

    const std::vector<std::pair<std::string, std::string>> cases{
        {"honest", "honest"},
        {"fixed state at pi/3", "fixed:theta_a=" + format_double(std::numbers::pi / 3) + ",claim=a"},
        {"fixed antipodal state", "fixed:theta_a=" + format_double(std::numbers::pi) + ",claim=a"},
        {"send |b>, claim a", "fixed:state=b,claim=a"},
        {"bell steering", "entangled:bell-steer"},
        {"perpendicular steering", "entangled:perp-steer"},
    };

    std::cout << "r = " << params.r << ", R = " << params.R
              << ", k = r(R+2) = " << params.r * (params.R + 2.0) << ", rounds = " << rounds
              << "\n\n";
    std::cout << std::left << std::setw(26) << "strategy" << std::right << std::setw(12) << "exact"
              << std::setw(12) << "simulated" << std::setw(10) << "stderr" << '\n';
    std::cout << std::fixed << std::setprecision(5);
    for (const auto &[name, spec] : cases) {
        const AliceStrategy alice = parse_alice_spec(spec);
        std::optional<double> exact;
        if (!std::holds_alternative<EntangledAlice>(alice)) {
            exact = enumerate_exact(alice, params).g_alice;
        }
        SimConfig cfg;
        cfg.rounds = rounds;
        cfg.seed = 7;
        cfg.params = params;
        cfg.alice = alice;
        cfg.workers = 4;
        const SimResult res = simulate(cfg);
        std::cout << std::left << std::setw(26) << name << std::right << std::setw(12);
        if (exact) {
            std::cout << *exact;
        } else {
            std::cout << "-";
        }
        std::cout << std::setw(12) << res.mean_gain_alice << std::setw(10) << res.standard_error
                  << '\n';
    }
    std::cout << "\nThe honest bias is r. Any strategy above that line gains from cheating.\n";
    return 0;
}
