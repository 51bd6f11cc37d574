// Copyright 2026 The REI Toolkit Authors. All Rights Reserved.
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

// Reference examples in plain REI markup. Template
// placeholders (O1, H1, c0, l, ...) are filled with short stand-in text.

#pragma once

#include <string>
#include <vector>

namespace rei::fixtures {

struct Row {
  std::string name;
  std::string input;
  // Model-side output with labels, when one is known.
  std::string output;
  // The output with labels removed.
  std::string realization;
};

inline const Row kLexiconLength{
    "lexicon and length",
    "<expression> <mask_0> stood(0) <mask_1> field(1) <mask_2> looking(2) "
    "<mask_3> <length=10> </expression>",
    "<expression> The_1 player_2 stood(0)_3 in_4 the_5 field(1)_6 "
    "looking(2)_7 at_8 the_9 batter_10 </expression>",
    "The player stood in the field looking at the batter"};

inline const Row kPositionLexicon{
    "position and lexicon",
    "Stephen was at a party. <expression> <mask_0> knocked(0) <mask_1> "
    "</expression> He checked it but it was completely broken.",
    "<expression> Stephen knocked(0) over a vase while drunk. </expression>",
    "Stephen knocked over a vase while drunk."};

inline const std::string kStoryContext =
    "My friends all love to go to the club to dance. They think it's a lot "
    "of fun and always invite. I finally decided to tag along last Saturday.";

inline const Row kAlternativeEnding{
    "position and alternative ending",
    kStoryContext +
        " <expression> <options> <choice_0> <mask_0> My friends decided to "
        "keep inviting me out as I am so much fun. </choice_0> <choice_1> "
        "<mask_1> The next weekend, I was asked to please stay home. "
        "</choice_1> </options> </expression>",
    "<expression> I danced terribly and broke a friend's toe. The next "
    "weekend, I was asked to please stay home. </expression>",
    "I danced terribly and broke a friend's toe. The next weekend, I was "
    "asked to please stay home."};

inline const std::vector<Row>& core_examples() {
  static const std::vector<Row> rows{kLexiconLength, kPositionLexicon,
                                     kAlternativeEnding};
  return rows;
}

// Task templates with placeholders filled in.
inline const std::vector<Row>& task_templates() {
  static const std::vector<Row> rows{
      {"anlg", "Jenny went out. <expression> <mask_0> </expression> She came home.",
       "", ""},
      {"anlg+length",
       "Jenny went out. <expression> <mask_0> <length=7> </expression> She "
       "came home.",
       "", ""},
      {"anli",
       "Jenny went out. <expression> <options> <choice_0> It rained. "
       "</choice_0> <choice_1> It was sunny. </choice_1> </options> "
       "</expression> She came home.",
       "", ""},
      {"commongen",
       "<expression> <mask_0> dog(0) <mask_1> frisbee(1) <mask_2> catch(2) "
       "<mask_3> </expression>",
       "", ""},
      {"commongen+length",
       "<expression> <mask_0> dog(0) <mask_1> frisbee(1) <mask_2> catch(2) "
       "<mask_3> <length=8> </expression>",
       "", ""},
      {"anlg+lexicon",
       "Jenny went out. <expression> <mask_0> walked(0) <mask_1> "
       "</expression> She came home.",
       "", ""},
      {"anlg+length+lexicon",
       "Jenny went out. <expression> <mask_0> walked(0) <mask_1> <length=7> "
       "</expression> She came home.",
       "", ""},
      {"story+infill",
       "Tom bought a kite. The wind was strong. He ran to the hill. "
       "<expression> <mask_0> <options> <choice_0> The kite flew high. "
       "</choice_0> <choice_1> The kite sank in a lake. </choice_1> "
       "</options> </expression>",
       "", ""},
      {"gigaword+length",
       "stocks rose sharply on monday after the report.\n Summarize the "
       "aforementioned text in a single phrase.\n <expression> <mask_0> "
       "<length=5> </expression>",
       "", ""},
      {"wiktionary",
       "Translate from English to German:\n\n English: The house is red. \n "
       "German: <expression> <mask_0> Haus(0) <mask_1> rot(1) <mask_2> "
       "</expression>",
       "", ""},
  };
  return rows;
}

inline const std::vector<Row>& model_outputs() {
  static const std::vector<Row> rows{
      {"commongen+length flan",
       "<expression> <mask_0> dance(0) <mask_1> performed(1) <mask_2> "
       "stage(2) <mask_3> wearing(3) <mask_4> costumes(4) <mask_5> "
       "<length=11> </expression>",
       "A_1 dance(0)_2 is_3 performed(1)_4 on_5 a_6 stage(2)_7 by_8 people_9 "
       "wearing(3)_10 costumes(4)_11",
       "A dance is performed on a stage by people wearing costumes"},
      {"commongen+length gpt",
       "<expression> <mask_0> dance(0) <mask_1> performed(1) <mask_2> "
       "stage(2) <mask_3> wearing(3) <mask_4> costumes(4) <mask_5> "
       "<length=11> </expression>",
       "A_1 traditional_2 dance(0)_3 is_4 performed(1)_5 on_6 the_7 "
       "stage(2),_8 wearing(3)_9 colorful_10 costumes(4)_11",
       "A traditional dance is performed on the stage, wearing colorful "
       "costumes"},
      {"anlg+length+lexicon flan",
       "Jim was not confident in his home repair skills. <expression> "
       "<mask_0> attended(0) <mask_1> <length=9> </expression> Jim was so "
       "excited to learn a new skill.",
       "Jim_1 bought_2 new_3 gloves_4 and_5 attended(0)_6 a_7 home_8 repair._9",
       "Jim bought new gloves and attended a home repair."},
      {"anlg+length+lexicon gpt",
       "Jim was not confident in his home repair skills. <expression> "
       "<mask_0> attended(0) <mask_1> <length=9> </expression> Jim was so "
       "excited to learn a new skill.",
       "Jim_1 attended(0)_2 a_3 home_4 repair_5 workshop_6 to_7 gain_8 "
       "confidence._9",
       "Jim attended a home repair workshop to gain confidence."},
      {"story+infill flan",
       "I tried going to the park the other day. The weather seemed nice "
       "enough for a walk. Within minutes of getting there I started "
       "sneezing. <expression> <options> <choice_0> <mask_0> My allergies "
       "were too bad and I had to go back home. </choice_0> <choice_1> "
       "<mask_1> It reminded me of how much I loved spring flowers. "
       "</choice_1> </options> </expression>",
       "There were a lot of people at the park. My allergies were too bad and "
       "I had to go back home.",
       "There were a lot of people at the park. My allergies were too bad and "
       "I had to go back home."},
      {"story+infill gpt",
       "I tried going to the park the other day. The weather seemed nice "
       "enough for a walk. Within minutes of getting there I started "
       "sneezing. <expression> <options> <choice_0> <mask_0> My allergies "
       "were too bad and I had to go back home. </choice_0> <choice_1> "
       "<mask_1> It reminded me of how much I loved spring flowers. "
       "</choice_1> </options> </expression>",
       "I realized I had forgotten the antihistamines at home. My allergies "
       "were too bad and I had to go back home.",
       "I realized I had forgotten the antihistamines at home. My allergies "
       "were too bad and I had to go back home."},
      {"gigaword+length flan",
       "japan 's toyota team europe were banned from the world rally "
       "championship for one year here on friday in a crushing ruling by the "
       "world council of the international automobile federation.\n "
       "Summarize the aforementioned text in a single phrase.\n "
       "<expression> <mask_0> <length=6> </expression>",
       "toyota_1 team_2 europe_3 banned_4 from_5 rallying_6",
       "toyota team europe banned from rallying"},
      {"gigaword+length gpt",
       "japan 's toyota team europe were banned from the world rally "
       "championship for one year here on friday in a crushing ruling by the "
       "world council of the international automobile federation.\n "
       "Summarize the aforementioned text in a single phrase.\n "
       "<expression> <mask_0> <length=6> </expression>",
       "toyota_1 team_2 europe_3 banned_4 by_5 fia_6",
       "toyota team europe banned by fia"},
      {"wiktionary gpt",
       "Translate from English to German:\n\n English: Jennifer Aniston "
       "need not always be perfect or successful. \n German: <expression> "
       "<mask_0> erfolgreich(0) <mask_1> </expression>",
       "Jennifer Aniston muss nicht immer perfekt oder erfolgreich(0) sein.",
       "Jennifer Aniston muss nicht immer perfekt oder erfolgreich sein."},
  };
  return rows;
}

}  // namespace rei::fixtures
