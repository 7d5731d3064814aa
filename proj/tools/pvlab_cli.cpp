// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pvlab/pvlab.h"

namespace
{
void print_line(const char* line, void*)
{
    std::cout << line << '\n' << std::flush;
}

int report(pvlab_status status)
{
    std::cerr << "pvlab: " << pvlab_status_string(status) << ": "
              << pvlab_last_error() << '\n';
    return 2;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo toolkit for variance bounds of Poisson functionals"};
    app.set_version_flag("--version", std::string(pvlab_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment JSON file")->required();
    run->add_option("--seed", seed, "override the config seed");

    auto* list = app.add_subcommand("list", "list registered functionals");
    auto* selftest
        = app.add_subcommand("selftest", "check byte-identical reruns");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    int exit_code = 2;
    if (*run)
    {
        pvlab_status const st = pvlab_run_experiment(
            config_path.c_str(), seed.has_value() ? 1 : 0, seed.value_or(0),
            print_line, nullptr, &exit_code);
        return st == PVLAB_OK ? exit_code : report(st);
    }
    if (*list)
    {
        size_t required = 0;
        pvlab_status st = pvlab_list_functionals(nullptr, 0, &required);
        if (st != PVLAB_OK)
        {
            return report(st);
        }
        std::vector<char> buffer(required);
        st = pvlab_list_functionals(buffer.data(), buffer.size(), &required);
        if (st != PVLAB_OK)
        {
            return report(st);
        }
        std::cout << buffer.data();
        return 0;
    }
    if (*selftest)
    {
        pvlab_status const st = pvlab_selftest(print_line, nullptr, &exit_code);
        return st == PVLAB_OK ? exit_code : report(st);
    }
    return 2;
}
