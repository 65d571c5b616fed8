#pragma once

#include <polydict/dictlearn.hpp>
#include <polydict/error.hpp>
#include <polydict/lstsq.hpp>
#include <polydict/metrics.hpp>
#include <polydict/pipeline/denoise.hpp>
#include <polydict/pipeline/experiment.hpp>
#include <polydict/pipeline/noise.hpp>
#include <polydict/pipeline/rir.hpp>
#include <polydict/pipeline/segment.hpp>
#include <polydict/pipeline/signal_io.hpp>
#include <polydict/plym_io.hpp>
#include <polydict/polymat.hpp>
#include <polydict/sparsecode.hpp>
