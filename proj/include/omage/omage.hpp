// omage.hpp — umbrella header for the full codec.
#pragma once

#include "omage/atlas.hpp"
#include "omage/baker.hpp"
#include "omage/core.hpp"
#include "omage/image.hpp"
#include "omage/mesh.hpp"
#include "omage/metrics.hpp"
#include "omage/obj_io.hpp"
#include "omage/omg_io.hpp"
#include "omage/packer.hpp"
#include "omage/pipeline.hpp"
#include "omage/png_io.hpp"
#include "omage/raster.hpp"
#include "omage/remesher.hpp"
#include "omage/resampler.hpp"
