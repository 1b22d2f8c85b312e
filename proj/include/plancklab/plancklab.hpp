// Umbrella header.
#pragma once

#include "plancklab/compare.hpp"
#include "plancklab/derand.hpp"
#include "plancklab/eigenfunction.hpp"
#include "plancklab/empirical.hpp"
#include "plancklab/field.hpp"
#include "plancklab/io.hpp"
#include "plancklab/kernel.hpp"
#include "plancklab/lattice.hpp"
#include "plancklab/measure.hpp"
#include "plancklab/parallel.hpp"
#include "plancklab/plot.hpp"
#include "plancklab/quad.hpp"
#include "plancklab/rng.hpp"
#include "plancklab/version.hpp"
