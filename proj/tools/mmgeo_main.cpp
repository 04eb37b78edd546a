#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mmgeo/runner.hpp"

namespace {

bool to_double(const std::string& text, double& value)
{
    if (text.empty()) return false;
    char* end = nullptr;
    value = std::strtod(text.c_str(), &end);
    return end != nullptr && *end == '\0' && std::isfinite(value);
}

bool to_steps(const std::string& text, int& value)
{
    if (text.empty()) return false;
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end == nullptr || *end != '\0' || v < 2 || v > 1000000) return false;
    value = static_cast<int>(v);
    return true;
}

bool parse_sweep(const std::string& text, mmgeo::SweepSpec& out, std::string& err)
{
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(':', pos);
        if (next == std::string::npos) {
            parts.push_back(text.substr(pos));
            break;
        }
        parts.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    if (parts.size() != 4) {
        err = "expected key:start:stop:steps";
        return false;
    }
    out.key = parts[0];
    if (out.key.empty()) {
        err = "empty sweep key";
        return false;
    }
    if (!to_double(parts[1], out.start) || !to_double(parts[2], out.stop)) {
        err = "start/stop must be finite numbers";
        return false;
    }
    if (!to_steps(parts[3], out.steps)) {
        err = "steps must be an integer >= 2";
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reflection-coupled mmWave link modeling: closed-form analysis and Monte Carlo"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string sweep_text;
    std::uint64_t seed = 0;
    std::uint64_t realizations = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Run configuration file")->required();
        sub->add_option("--sweep", sweep_text, "Parameter sweep as key:start:stop:steps");
        sub->add_option("--seed", seed, "Master seed override");
        sub->add_option("--realizations", realizations, "Monte Carlo realization count override");
        sub->add_option("--out", out_path, "Output CSV path")->required();
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Write model outputs (counts, path loss, delay stats)");
    CLI::App* simulate = app.add_subcommand("simulate", "Write Monte Carlo estimates with standard errors");
    CLI::App* compare = app.add_subcommand("compare", "Write model vs Monte Carlo with agreement flags");
    add_common(analyze);
    add_common(simulate);
    add_common(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    mmgeo::RunSpec spec;
    CLI::App* sub = app.get_subcommands().front();
    if (sub == analyze) {
        spec.mode = mmgeo::RunMode::Analyze;
    } else if (sub == simulate) {
        spec.mode = mmgeo::RunMode::Simulate;
    } else {
        spec.mode = mmgeo::RunMode::Compare;
    }
    spec.config_path = config_path;
    spec.out_path = out_path;
    if (sub->count("--seed") > 0) spec.seed = seed;
    if (sub->count("--realizations") > 0) spec.realizations = realizations;
    if (sub->count("--sweep") > 0) {
        mmgeo::SweepSpec sw;
        std::string err;
        if (!parse_sweep(sweep_text, sw, err)) {
            std::cerr << "error: invalid --sweep: " << err << '\n';
            return 2;
        }
        spec.sweep = sw;
    }
    return mmgeo::run(spec, std::cerr);
}
