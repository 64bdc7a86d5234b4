// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#include "peelwave/cli.hpp"

int main(int argc, char** argv) { return peelwave::cli::run(argc, argv); }
