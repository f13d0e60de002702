#pragma once

#include <string>

#include "muse/api.hpp"

namespace muse::cli {

/// Serves `api` over HTTP/1.1 until the process is stopped.
void serve(Api& api, const std::string& host, int port);

}  // namespace muse::cli
