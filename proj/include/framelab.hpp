#pragma once

#include "framelab/word.hpp"
#include "framelab/coset.hpp"
#include "framelab/l2.hpp"
#include "framelab/lines.hpp"
#include "framelab/frame.hpp"
#include "framelab/construction.hpp"
#include "framelab/parametrize.hpp"
#include "framelab/riesz.hpp"
#include "framelab/config.hpp"
#include "framelab/cli.hpp"
