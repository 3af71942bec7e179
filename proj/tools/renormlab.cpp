#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "renormlab/commands.hpp"

using namespace renormlab;

int main(int argc, char** argv)
{
    CLI::App app{"renormlab: period-tripling renormalization of symmetric cubic bimodal maps"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> side, format, out;
    std::optional<int> depth, grid, count, length;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<double> c_lo, c_hi;
    std::string epsilons;

    app.add_option("--config", config_path, "key=value config file (default: $RENORMLAB_CONFIG)");
    app.add_option("--side", side, "l, r or both");
    app.add_option("--depth", depth, "tower depth (tower), levels (renorm-check), generations (extend, shift-check)");
    app.add_option("--grid", grid, "grid size of the command");
    app.add_option("--tol", tol, "root tolerance");
    app.add_option("--seed", seed, "PRNG seed");
    app.add_option("--out", out, "output path (default stdout)");
    app.add_option("--format", format, "csv or json");

    auto* ratios = app.add_subcommand("ratios", "scaling and gap ratios over a c-range");
    ratios->add_option("--c-lo", c_lo, "start of the c-range");
    ratios->add_option("--c-hi", c_hi, "end of the c-range");
    app.add_subcommand("feasible", "feasible domains and their fixed points");
    app.add_subcommand("fixed-points", "fixed points of the induced map on both sides");
    app.add_subcommand("tower", "interval tower of the fixed-point scaling data");
    app.add_subcommand("renorm-check", "R f = f, renormalizability clauses and the lemma suite");
    app.add_subcommand("extend", "C^{1+Lip} extension and its certification");
    auto* shift = app.add_subcommand("shift-check", "shift embedding: conjugacy and injectivity");
    shift->add_option("--count", count, "number of random sequences");
    shift->add_option("--length", length, "sequence length");
    auto* perturb = app.add_subcommand("perturb", "continuum of perturbed fixed points");
    perturb->add_option("--eps", epsilons, "comma separated epsilon list");
    app.add_subcommand("all", "every command; the full verification report");

    // options are accepted before or after the subcommand
    for (CLI::App* sub : app.get_subcommands({}))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();

    try {
        RunConfig cfg = config_from_environment();
        if (!config_path.empty())
            apply_config_file(cfg, config_path);
        if (side)
            cfg.sides = parse_sides(*side);
        if (format)
            cfg.format = parse_format(*format);
        if (out)
            cfg.out = *out;
        if (tol)
            cfg.root_tol = *tol;
        if (seed)
            cfg.seed = *seed;
        if (count)
            cfg.shift_count = *count;
        if (length)
            cfg.shift_length = *length;
        if (!epsilons.empty())
            cfg.epsilons = parse_list(epsilons);
        if (depth) {
            if (name == "renorm-check")
                cfg.renorm_levels = *depth;
            else if (name == "extend" || name == "shift-check")
                cfg.extension_depth = *depth;
            else
                cfg.tower_depth = *depth;
        }
        if (grid) {
            if (name == "ratios")
                cfg.ratio_grid = *grid;
            else if (name == "feasible")
                cfg.feasible_grid = *grid;
            else
                cfg.sample_grid = *grid;
        }
        cfg.validate();

        CommandOutput result;
        if (name == "ratios")
            result = cmd_ratios(cfg, {c_lo, c_hi});
        else if (name == "feasible")
            result = cmd_feasible(cfg);
        else if (name == "fixed-points")
            result = cmd_fixed_points(cfg);
        else if (name == "tower")
            result = cmd_tower(cfg);
        else if (name == "renorm-check")
            result = cmd_renorm_check(cfg);
        else if (name == "extend")
            result = cmd_extend(cfg);
        else if (name == "shift-check")
            result = cmd_shift_check(cfg);
        else if (name == "perturb")
            result = cmd_perturb(cfg);
        else
            result = cmd_all(cfg);
        emit(result, cfg);
        return exit_code(result);
    } catch (const ConfigError& e) {
        std::cerr << "renormlab: config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "renormlab: " << e.what() << '\n';
        return 3;
    }
}
