#pragma once

#include "nomarch/aa.hpp"
#include "nomarch/ada.hpp"
#include "nomarch/errors.hpp"
#include "nomarch/evaluation.hpp"
#include "nomarch/german_credit.hpp"
#include "nomarch/io.hpp"
#include "nomarch/nominal.hpp"
#include "nomarch/parallel.hpp"
#include "nomarch/pipeline.hpp"
#include "nomarch/rng.hpp"
#include "nomarch/simplex_ls.hpp"
#include "nomarch/simplex_viz.hpp"
#include "nomarch/text.hpp"
#include "nomarch/types.hpp"
#include "nomarch/version.hpp"
