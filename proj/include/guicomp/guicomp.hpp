#pragma once

// Core engine. The HTTP layer lives in guicomp/server.hpp.

#include "guicomp/attention.hpp"
#include "guicomp/autoencoder.hpp"
#include "guicomp/corpus.hpp"
#include "guicomp/errors.hpp"
#include "guicomp/feedback.hpp"
#include "guicomp/knn.hpp"
#include "guicomp/layout.hpp"
#include "guicomp/metrics.hpp"
#include "guicomp/palette.hpp"
#include "guicomp/raster.hpp"
#include "guicomp/recommend.hpp"
#include "guicomp/rico.hpp"
#include "guicomp/synth.hpp"
#include "guicomp/wireframe.hpp"
