// Copyright 2026 The INP-X Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INPX_INPX_HPP_
#define INPX_INPX_HPP_

#include "inpx/corrupt.hpp"
#include "inpx/csv.hpp"
#include "inpx/error.hpp"
#include "inpx/eval.hpp"
#include "inpx/exchange.hpp"
#include "inpx/fft.hpp"
#include "inpx/filter.hpp"
#include "inpx/image.hpp"
#include "inpx/io.hpp"
#include "inpx/manifest.hpp"
#include "inpx/parallel.hpp"
#include "inpx/report.hpp"
#include "inpx/rng.hpp"
#include "inpx/spectra.hpp"
#include "inpx/stats.hpp"
#include "inpx/theory.hpp"

#endif  // INPX_INPX_HPP_
