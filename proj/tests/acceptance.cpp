#include <cstdlib>
#include <iostream>
#include <string>

#include "lossaverse/acceptance.hpp"

using namespace lossaverse;

int main(int argc, char** argv)
{
    acceptance::Options opt;
    for (int i = 1; i < argc; ++i)
        opt.only.insert(std::stoi(argv[i]));
    std::size_t failed = 0;
    double total = 0;
    acceptance::run(opt, [&](const acceptance::Criterion& c) {
        std::cout << acceptance::format_line(c) << "\n";
        for (const auto& d : c.details)
            std::cout << "        " << d << "\n";
        std::cout.flush();
        failed += !c.passed();
        total += c.seconds;
    });
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << failed << " criteria failed, total " << total << " s\n";
    return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
