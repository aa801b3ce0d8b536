#include "app/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

// Usage: thermo_acceptance [seed]
int main(int argc, char** argv) {
    thermo::app::AcceptanceOptions opts;
    if (argc > 1)
        opts.seed = std::strtoull(argv[1], nullptr, 10);
    opts.on_result = [](const thermo::app::CriterionResult& r) {
        std::cout << thermo::app::result_line(r) << "  [" << std::to_string(int(r.seconds + 0.5)) << " s]"
                  << std::endl;
    };
    const auto results = thermo::app::run_acceptance(opts);
    int failed = 0;
    for (const auto& r : results)
        failed += !r.passed;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
