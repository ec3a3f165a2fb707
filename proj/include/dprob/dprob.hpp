// Copyright 2026 The dprob Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPROB_DPROB_HPP
#define DPROB_DPROB_HPP

#include "dprob/aggregate.hpp"
#include "dprob/baselines.hpp"
#include "dprob/candidate_models.hpp"
#include "dprob/commands.hpp"
#include "dprob/dataset.hpp"
#include "dprob/dprob_engine.hpp"
#include "dprob/error.hpp"
#include "dprob/hyper_select.hpp"
#include "dprob/kernel_gp.hpp"
#include "dprob/nelder_mead.hpp"
#include "dprob/numeric.hpp"
#include "dprob/parallel.hpp"
#include "dprob/simulation.hpp"
#include "dprob/study.hpp"
#include "dprob/svg.hpp"

#endif  // DPROB_DPROB_HPP
