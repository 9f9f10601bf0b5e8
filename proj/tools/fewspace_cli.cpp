// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

// Batch front-end: fewspace <task> --spec doc.json [flags]

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"

#include "fewspace/cli.hpp"

namespace {

std::string read_spec(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fewspace::Error("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
void flag(CLI::App& app, const char* name, std::optional<T>& slot, const char* help) {
    app.add_option_function<T>(name, [&slot](const T& v) { slot = v; }, help);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expected zero counts of random fewspace systems"};
    app.require_subcommand(0, 1);

    std::string spec_path;
    fewspace::cli::Settings settings;
    app.add_option("--spec", spec_path, "space-spec document (JSON); '-' reads stdin")->required();
    flag(app, "--tol", settings.tol, "quadrature tolerance");
    flag(app, "--samples", settings.samples, "Monte Carlo samples");
    flag(app, "--seed", settings.seed, "Monte Carlo seed");
    flag(app, "--radius", settings.radius, "Monte Carlo disk radius");
    flag(app, "--threads", settings.threads, "worker threads (0 = all cores)");
    flag(app, "--budget", settings.budget, "quadrature evaluation budget");
    flag(app, "--truncation", settings.truncation, "series truncation order for GAF/GEF");

    const char* help[] = {"expected count by quadrature",       "Monte Carlo zero count",
                          "mixed count, direct and extracted",  "Bernstein and Kushnirenko counts",
                          "density on a grid (CSV)",            "diagonal basis weights (CSV)"};
    for (std::size_t i = 0; i < std::size(fewspace::cli::kTasks); ++i)
        app.add_subcommand(fewspace::cli::kTasks[i], help[i])->fallthrough();

    CLI11_PARSE(app, argc, argv);
    if (!app.get_subcommands().empty()) settings.task = app.get_subcommands().front()->get_name();

    try {
        std::cout << fewspace::cli::run_text(read_spec(spec_path), settings).text();
    } catch (const fewspace::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const fewspace::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
