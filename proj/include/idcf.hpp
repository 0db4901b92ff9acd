/*
   Copyright 2026 The idcf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "idcf/bounds.hpp"
#include "idcf/cf_core.hpp"
#include "idcf/csv.hpp"
#include "idcf/error.hpp"
#include "idcf/idtest.hpp"
#include "idcf/parallel.hpp"
#include "idcf/quadrature.hpp"
#include "idcf/refdist.hpp"
#include "idcf/report.hpp"
#include "idcf/rng.hpp"
#include "idcf/special.hpp"
