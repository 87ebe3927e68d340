#pragma once

#include <cstdint>

#include "wormwatch/time_util.hpp"

namespace wormwatch::ingest {

/// Prefix counts carried by one BGP UPDATE message.
struct UpdateRecord {
  EpochSeconds timestamp_s = 0;
  std::uint64_t announced = 0;
  std::uint64_t withdrawn = 0;

  friend bool operator==(const UpdateRecord&, const UpdateRecord&) = default;
};

}  // namespace wormwatch::ingest
