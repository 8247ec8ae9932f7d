// Copyright 2026 The chanmaj Authors
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


#pragma once

#include "chanmaj/classical.hpp"
#include "chanmaj/entropy.hpp"
#include "chanmaj/errors.hpp"
#include "chanmaj/games.hpp"
#include "chanmaj/linalg.hpp"
#include "chanmaj/lp.hpp"
#include "chanmaj/majorization.hpp"
#include "chanmaj/quantum.hpp"
#include "chanmaj/tolerance.hpp"
