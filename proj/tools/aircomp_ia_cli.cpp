#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aircomp_ia/aircomp_ia.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw aircomp_ia::ParseError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::string mode;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "run configuration file (flat key = value lines)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory for CSV files");
    cmd->add_option("--mode", opts.mode, "scalar mode override")->check(CLI::IsMember({"float", "exact"}));
    cmd->add_option("--seed", opts.seed, "master seed override")->each([&](const std::string&) {
        opts.seed_set = true;
    });
}

aircomp_ia::SimConfig load(const CommonOptions& opts) {
    aircomp_ia::SimConfig cfg = aircomp_ia::parse_config(read_file(opts.config_path));
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (!opts.mode.empty()) cfg.mode = opts.mode;
    if (opts.seed_set) cfg.seed = opts.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interference-aligned over-the-air computation simulator"};
    app.require_subcommand(1);

    CommonOptions opts;
    int (*command)(const aircomp_ia::SimConfig&, std::ostream&) = nullptr;

    auto* verify = app.add_subcommand("verify-alignment", "check containment and rank per receiver");
    add_common(verify, opts);
    verify->callback([&] { command = aircomp_ia::cmd_verify_alignment; });

    auto* simulate = app.add_subcommand("simulate", "run Monte-Carlo end-to-end trials");
    add_common(simulate, opts);
    simulate->callback([&] { command = aircomp_ia::cmd_simulate; });

    auto* dof = app.add_subcommand("dof-table", "emit exact dimension fractions per n");
    add_common(dof, opts);
    dof->callback([&] { command = aircomp_ia::cmd_dof_table; });

    auto* oracle = app.add_subcommand("rank-oracle", "exact full-rank fractions of random power products");
    add_common(oracle, opts);
    oracle->callback([&] { command = aircomp_ia::cmd_rank_oracle; });

    auto* baseline = app.add_subcommand("baseline", "time-sharing and alignment-only reference points");
    add_common(baseline, opts);
    baseline->callback([&] { command = aircomp_ia::cmd_baseline; });

    CLI11_PARSE(app, argc, argv);

    try {
        const aircomp_ia::SimConfig cfg = load(opts);
        return command(cfg, std::cerr);
    } catch (const aircomp_ia::ParseError& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return aircomp_ia::kExitConfigError;
    } catch (const aircomp_ia::ValidationError& e) {
        std::cerr << "config validation error: " << e.what() << "\n";
        return aircomp_ia::kExitConfigError;
    } catch (const aircomp_ia::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return aircomp_ia::kExitFailure;
    }
}
