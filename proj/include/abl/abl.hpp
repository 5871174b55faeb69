#pragma once

// Umbrella header for the whole toolkit.

#include "abl/banach.hpp"
#include "abl/coloring.hpp"
#include "abl/distortion.hpp"
#include "abl/experiment.hpp"
#include "abl/gallery.hpp"
#include "abl/homogeneity.hpp"
#include "abl/io.hpp"
#include "abl/kuratowski.hpp"
#include "abl/linear_maps.hpp"
#include "abl/lipschitz_graph.hpp"
#include "abl/metric_space.hpp"
#include "abl/net_embedding.hpp"
#include "abl/nets.hpp"
#include "abl/probe_map.hpp"
#include "abl/rng.hpp"
#include "abl/slog.hpp"
#include "abl/subspace_chain.hpp"
#include "abl/thickness.hpp"
