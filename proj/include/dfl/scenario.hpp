// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! End-to-end scenarios. Each writes its CSV files and report.json into the
//! output directory; module errors end the run with RunReport::error set.
#pragma once

#include <memory>
#include <string>

#include "dfl/config.hpp"
#include "dfl/detector.hpp"
#include "dfl/report.hpp"

namespace dfl {

RunReport run_scenario(const ScenarioConfig& config, const std::string& out_dir);

//! The configured Gaussian packet on its default grid.
std::shared_ptr<MomentumAmplitude> make_packet(const ScenarioConfig& c);
DetectorOptions detector_options(const ScenarioConfig& c);
SpectralOptions spectral_options(const ScenarioConfig& c);

}  // namespace dfl
