#include "arigraph/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace arigraph::llm {

namespace {

const std::string kTripletExtraction = R"(Guidelines for Building the Knowledge Graph:

Creating Nodes and Triplets: Nodes should depict entities or concepts, similar to Wikipedia nodes. Use a structured triplet format to capture data, as follows: "subject, relation, object". For example, from "Albert Einstein, born in Germany, is known for developing the theory of relativity," extract "Albert Einstein, country of birth, Germany; Albert Einstein, developed, Theory of Relativity."
Remember that you should break complex triplets like "John, position, engineer in Google" into simple triplets like "John, position, engineer", "John, work at, Google".
Length of your triplet should not be more than 7 words. You should extract only concrete knowledges, any assumptions must be described as hypothesis.
For example, from phrase "John have scored many points and potentiallyy will be winner" you should extract "John, scored many, points; John, could be, winner" and should not extract "John, will be, winner".
Remember that object and subject must be an atomary units while relation can be more complex and long.
If observation states that you take item, the triplet shoud be: 'item, is in, inventory' and nothing else.

Do not miss important information. If observation is 'book involves story about knight, who needs to kill a dragon', triplets should be 'book, involves, knight', 'knight, needs to kill, dragon'. If observation involves some type of notes, do not forget to include triplets about entities this note includes.
There could be connections between distinct parts of observations. For example if there is information in the beginning of the observation that you are in location, and in the end it states that there is an exit to the east, you should extract triplet: 'location, has exit, east'.
Several triplets can be extracted, that contain information about the same node. For example 'kitchen, contains, apple', 'kitchen, contains, table', 'apple, is on, table'. Do not miss this type of connections.
Other examples of triplets: 'room z, contains, black locker'; 'room x, has exit, east', 'apple, is on, table', 'key, is in, locker', 'apple, to be, grilled', 'potato, to be, sliced', 'stove, used for, frying', 'recipe, requires, green apple', 'recipe, requires, potato'.
Do not include triplets that state the current location of an agent like 'you, are in, location'.
Do not use 'none' as one of the entities.
If there is information that you read something, do not forget to incluse triplets that state that entitie that you read contains information that you extract.

Example of triplets you have extracted before: {example}

Observation: {observation}

Remember that triplets must be extracted in format: "subject_1, relation_1, object_1; subject_2, relation_2, object_2; ..."

Extracted triplets:)";

const std::string kOutdatedSelection = R"(The triplets denote facts about the environment where the player moves. The player takes actions and the environment changes, so some triplets from the list of existing triplets can be replaced with one of the new triplets. For example, the player took the item from the locker and the existing triplet "item, is in, locker" should be replaced with the new triplet "item, is in, inventory".

Sometimes there are no triplets to replace:
Example of existing triplets: "Golden locker, state, open"; "Room K, is west of, Room I"; "Room K, has exit, east".
Example of new triplets: "Room T, is north of, Room N"; "Room T, has exit, south".
Example of replacing: []. Nothisg to replace here

Sometimes several triplets can be replaced with one:
Example of existing triplets: "kitchen, contains, broom"; "broom, is on, floor".
Example of new triplets: "broom, is in, inventory".
Example of replacing: [["kitchen, contains, broom" -> "broom, is in, inventory"], ["broom, is on, floor" -> "broom, is in, inventory"]]. Because broom changed location from the floor in the kitchen to players inventory.

Ensure that triplets are only replaced if they contain redundant or conflicting information about the same aspect of an entity. Triplets should not be replaced if they provide distinct or complementary information about entities compared to the new triplets. Specifically, consider the relationships, properties, or contexts described by each triplet and verify that they align before replacement. If there is uncertainty about whether a triplet should be replaced, prioritize retaining the existing triplet over replacing it. When comparing existing and new triplets, if they refer to different aspects or attributes of entities, do not replace them. Replacements should only occur when there is semantic duplication between an existing triplet and a new triplet.
Example of existing triplets: "apple, to be, cooked", 'knife, used for, cutting', 'apple, has been, sliced'
Example of new triplets: "apple, is on, table", 'kitchen, contsins, knife', 'apple, has beed, grilled'.
Example of replacing: []. Nothing to replace here. These triplets describe different properties of items, so they should not be replaced.

Another example of when not to replase existung triplets:
Example of existing triplets: "brush, used for, painting".
Example of new triplets: "brush, is in, art class".
Example of replacing: []. Nothing to replace here. These triplets describe different properties of brush, so they should not be replaced.

I repeat, do not replace triplets, if they carry differend type of information about entities!!! It is better to leave a tripplet, than to replace the one that has important information. Do not state that triplet needs to be replaced if you are not sure!!!
If you find triplet in Existing triplets which semantically duplicate some triplet in New triplets, replace such triplet from Existing triplets. However do not replace triplets if they refer to different things.
####
Generate only replacing, no descriptions are needed.
Existing triplets: {ex_triplets}.
New triplets: {new_triplets}.
####
Warning! Replacing must be generated strictly in following format: [[outdated_triplet_1 -> actual_triplet_1], [outdated_triplet_2 -> actual_triplet_2], ...], you MUST NOT include any descriptions in answer.
Replacing:)";

const std::string kExplorationCheck = R"(####
INSTRUCTION:
You will be provided with sub-goals and reasons for it from plan of an agent. Your task is to state if this sub goals require exploration of the environment, finding or locating something.
Answer with just True or False.
####
Plan:
{plan0})";

const std::string kPlanning = R"(####
INSTRUCTION:
You are a planner within the agent system tasked with navigating the environment in a text-based game.
Your role is to create a concise plan to achieve your main goal or modify your current plan based on new information received.
Make sure your sub-goals will benefit the achivment of your main goal. If your main goal is an ongoing complex process, also put sub-goals that can immediately benifit achiving something from your main goal.
If you need to find something, put it into sub-goal.
If you wish to alter or delete a sub-goal within the current plan, confirm that this sub-goal has been achieved according to the current observation or is no longer relevant to achieving your main goal. Untill then do not change wording in "sub_goal" elements of your plan and their position in the plan. Only change wording in "reason" part to track the progress of completion of sub-goals.
If sub-goal was completed or confirmed to be no more relevant, delete it, replase it with new one or with lower priority sub-goals from the plan. Untill then keep the structure of sub-goals as it is. Create new sub-goals only if they will benifit your main goal and do not prioritize them over current sub-goals.
If your task is to obtain something, make shure that the item is in your inventory before changing your sub-goal.
Your plan contains important information and goals you need to complete. Do not alter sub-goals or move them in hierarchy if they were not completed!
Pay attention to your inventory, what items you are carring, when setting the sub-goals. These items might be important.
Pay attention to information from your memory module, it is important.
There should always be at least one sub-goal.
State the progress of completing your sub-goals in "reason" for each sub-goal.

Write your answer exactly in this json format:
{ "main_goal": "...",
  "plan_steps": [{
      "sub_goal_1": "...",
      "reason": "..."
    },
    {
      "sub_goal_2": "...",
      "reason": "..."
    },
    {
      "sub_goal_...": "...",
      "reason": "..."
    }],
  "your_emotion":
    {
      "your_current_emotion": "emotion",
      "reason_behind_emotion": "..."
    }}

Do not write anything else.
####
1. Main goal: {main_goal}
2. History of {n_prev} last observations and actions: {observations}
3. Your current observation: {observation}
4. Information from the memory module that can be relevant to current situation: {subgraph}
5. Your {topk_episodic} most relevant episodic memories from the past for the current situation: {top_episodic}.
6. Your previous plan: {plan0}
*if is explore* 7. Yet unexplored exits in the environment: {all_unexpl_exits})";

const std::string kDecision = R"(####
INSTRUCTION:
You are an action selector within an agent system designed to navigate an environment in a text-based game. Your role involves receiving information about an agent and the state of the environment alongside a list of possible actions.
Your primary objective is to choose an action from the list of possible actions that aligns with the goals outlined in the plan, giving precedence to main goal or sub-goals in the order they appear (main goal is highest priority, then sub_goal_1, sub_goal_2, etc.). However, prioritize sub-goals that can be solved by perfroming single action in current situation, like 'take something', over long term sub-goals.
Actions like "go to 'location'" will move an agent directly to stated location, use them instead of "go_west' type of actions, if the destination you want to move to is further than 1 step away.
In tasks centered around exploration or locating something, prioritize actions that guide the agent to previously unexplored areas. You can deduce which locations have been visited based on the history of observations and information from your memory module.
Performing same action typically will not provide different results, so if you are stuck, try to perform other actions or prioritize goals to explore the environment.
You may choose actions only from the list of possible actions. You must choose strictly one action.
Write your answer exactly in this json format:

{
  "reason_for_action": "reason"
  "action_to_take": "selected action"

}

Do not write anything else.
####
1. Main goal: {main_goal}
2. History of {n_prev} last observations and actions: {observations}
3. Your current observation: {observation}
4. Information from the memory module that can be relevant to current situation:  {subgraph}
5. Your {topk_episodic} most relevant episodic memories from the past for the current situation: {top_episodic}.
6. Your current plan: {plan0}
*if is explore* 7. Yet unexplored exits in the environment: {all_unexpl_exits}

Possible actions in current situation: {valid_actions})";

const std::string kSummarization = R"(####
INSTRUCTION:
You are a guide within a team of agents engaging in a text-based game. Your role is to concisely yet thoroughly detail all the essential aspects of the current situation. Ensure that your summary aids in information extraction and facilitates the decision-making process by focusing on pertinent details and excluding extraneous information. Incorporate a strategic outlook in your narrative, emphasizing information integral to forming a tactical plan.

Accurately relay the outcomes of previously attempted actions, as this is pivotal for shaping subsequent choices. Your account will form the sole basis on which the decision-making agents operate; thus, clarity and avoidance of potential confusion are paramount.

Be judicious with your inferences, presenting only well-substantiated information that is likely to be of practical benefit. Your account should be succinct, encapsulated within a maximum of three paragraphs.
####
1. Main goal: {main_goal}
2. History of {n_prev} last observations and actions: {observations}
3. Your current observation: {observation}
4. Your previous summary: {summary}
Your summary: )";

const std::string kImportance = R"(####
INSTRUCTION:
You rate how important a memory is for an agent playing a text-based game.
On the scale of 1 to 10, where 1 is purely mundane (e.g. an empty corridor, a repeated description) and 10 is extremely important (e.g. a recipe, a note with instructions, a key discovery), rate the likely importance of the following memory.
Answer with a single integer and nothing else.
####
Memory: {memory}
Rating: )";

const char kExploreMarker[] = "*if is explore* ";

std::string apply_explore_marker(std::string text, bool exploration) {
    size_t pos = text.find(kExploreMarker);
    if (pos == std::string::npos) return text;
    if (exploration) {
        text.erase(pos, sizeof(kExploreMarker) - 1);
        return text;
    }
    size_t line_end = text.find('\n', pos);
    size_t line_begin = (pos > 0 && text[pos - 1] == '\n') ? pos - 1 : pos;
    if (line_end == std::string::npos) {
        text.erase(line_begin);
    } else {
        text.erase(line_begin, line_end - line_begin);
    }
    return text;
}

void write_asset(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

const std::string& triplet_extraction_template() { return kTripletExtraction; }
const std::string& outdated_selection_template() { return kOutdatedSelection; }
const std::string& exploration_check_template() { return kExplorationCheck; }
const std::string& planning_template() { return kPlanning; }
const std::string& decision_template() { return kDecision; }
const std::string& summarization_template() { return kSummarization; }
const std::string& importance_template() { return kImportance; }

std::string render_template(std::string text,
                            const std::vector<std::pair<std::string, std::string>>& slots) {
    for (const auto& [name, value] : slots) {
        const std::string placeholder = "{" + name + "}";
        size_t pos = 0;
        while ((pos = text.find(placeholder, pos)) != std::string::npos) {
            text.replace(pos, placeholder.size(), value);
            pos += value.size();
        }
    }
    return text;
}

std::string render_planning_prompt(const std::string& main_goal, int n_prev,
                                   const std::string& observations, const std::string& observation,
                                   const std::string& subgraph, int topk_episodic,
                                   const std::string& top_episodic, const std::string& plan0,
                                   const std::string& unexplored_exits, bool exploration) {
    std::string text = apply_explore_marker(planning_template(), exploration);
    return render_template(std::move(text),
                           {{"main_goal", main_goal},
                            {"n_prev", std::to_string(n_prev)},
                            {"observations", observations},
                            {"observation", observation},
                            {"subgraph", subgraph},
                            {"topk_episodic", std::to_string(topk_episodic)},
                            {"top_episodic", top_episodic},
                            {"plan0", plan0},
                            {"all_unexpl_exits", unexplored_exits}});
}

std::string render_decision_prompt(const std::string& main_goal, int n_prev,
                                   const std::string& observations, const std::string& observation,
                                   const std::string& subgraph, int topk_episodic,
                                   const std::string& top_episodic, const std::string& plan0,
                                   const std::string& unexplored_exits, bool exploration,
                                   const std::string& valid_actions) {
    std::string text = apply_explore_marker(decision_template(), exploration);
    return render_template(std::move(text),
                           {{"main_goal", main_goal},
                            {"n_prev", std::to_string(n_prev)},
                            {"observations", observations},
                            {"observation", observation},
                            {"subgraph", subgraph},
                            {"topk_episodic", std::to_string(topk_episodic)},
                            {"top_episodic", top_episodic},
                            {"plan0", plan0},
                            {"all_unexpl_exits", unexplored_exits},
                            {"valid_actions", valid_actions}});
}

void write_prompt_assets(const std::string& directory) {
    std::filesystem::path dir(directory);
    std::filesystem::create_directories(dir);
    write_asset(dir / "triplet_extraction.txt", triplet_extraction_template());
    write_asset(dir / "outdated_selection.txt", outdated_selection_template());
    write_asset(dir / "exploration_check.txt", exploration_check_template());
    write_asset(dir / "planning.txt", planning_template());
    write_asset(dir / "decision.txt", decision_template());
    write_asset(dir / "summarization.txt", summarization_template());
    write_asset(dir / "importance.txt", importance_template());
}

}  // namespace arigraph::llm
