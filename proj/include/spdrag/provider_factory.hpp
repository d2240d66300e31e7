// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "spdrag/config.hpp"
#include "spdrag/http_providers.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

// Builds the provider set for the configured mode. Each call can take its
// own trace sink (per-run accounting) while sharing one request gate. The
// transport is only touched in http mode, so a poisoned transport proves
// that mock runs never open a connection.
ProviderSet make_providers(const Config& config, std::shared_ptr<TraceSink> trace,
                           std::shared_ptr<RequestGate> gate = nullptr,
                           std::shared_ptr<Transport> transport = nullptr,
                           SleepFn sleep = nullptr);

}  // namespace spdrag
