#pragma once

#include <string>

#include "hk/composition.hpp"
#include "hk/instantiation.hpp"
#include "hk/run.hpp"

namespace hk::io {

/// GraphViz text. Places are circles, transitions boxes; interface elements
/// sit on rank=min (left) and rank=max (right) boundaries inside a cluster
/// named after the module. Output is deterministic.
std::string to_dot(const Module& m);
/// As for modules, with the initial marking written into the place labels.
std::string to_dot(const System& sys);
/// Left-to-right occurrence net; conditions are circles labeled place=value.
std::string to_dot(const Run& r);

}  // namespace hk::io
