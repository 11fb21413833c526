// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include <CLI11.hpp>

#include "toy_corpus.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write a synthetic toy corpus with a ready-to-run config"};
    std::string dir, stub;
    corpusforge::toy::ToyOptions opt;
    app.add_option("dir", dir, "Output directory")->required();
    app.add_option("--stub-engine", stub, "Path to corpusforge-stub-engine")->required();
    app.add_option("--speakers", opt.speakers);
    app.add_option("--utterances", opt.utterances_per_speaker);
    app.add_option("--engines", opt.engines);
    app.add_option("--seed", opt.seed);
    CLI11_PARSE(app, argc, argv);

    opt.stub_engine = std::filesystem::absolute(stub);
    auto corpus = corpusforge::toy::write_toy_corpus(dir, opt);
    std::cout << corpus.config.string() << "\n";
    return 0;
}
