"""Benchmark dataset generators.

Five desk-scale suites mirror the evaluation protocol: routing, sensor
binding, multi-turn task parsing, fast-thinking retrieval, and tool
extensibility. Every generator is seeded, emits ground truth alongside the
instances, ships the scripted rules that a correct parse implies, and
rejects any candidate whose ROUGE-L overlap with an accepted instance
exceeds 0.7.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from ..core import SensorId
from ..errors import InsufficientDiversity
from ..gateway import SCHEMA_PIA, SCHEMA_ROUTE, SCHEMA_SCRIPT, SCHEMA_SIA, Rule
from .rouge import rouge_l_text

DIVERSITY_CUTOFF = 0.7


@dataclass
class DialogueTurn:
    text: str
    expected: dict[str, Any]


@dataclass
class SuiteInstance:
    id: str
    text: str  # diversity-filter text (whole dialogue for taskparser)
    category: str  # condition bucket, e.g. "sia-easy"
    expected: dict[str, Any] = field(default_factory=dict)
    turns: list[DialogueTurn] = field(default_factory=list)


@dataclass
class Cluster:
    cluster_id: int
    canonical: str
    variants: list[str]
    script: dict[str, Any]


@dataclass
class Suite:
    name: str
    seed: int
    params: dict[str, Any]
    instances: list[SuiteInstance] = field(default_factory=list)
    rules: list[Rule] = field(default_factory=list)
    skills: list[dict[str, Any]] = field(default_factory=list)
    clusters: list[Cluster] = field(default_factory=list)

    def by_category(self) -> dict[str, list[SuiteInstance]]:
        out: dict[str, list[SuiteInstance]] = {}
        for instance in self.instances:
            out.setdefault(instance.category, []).append(instance)
        return out


def select_diverse(
    candidates: Iterable[str],
    quota: int,
    accepted_texts: list[str],
) -> list[str]:
    """Greedy diversity filter: accept while pairwise ROUGE-L stays <= 0.7.

    ``accepted_texts`` carries previously accepted instances (across
    categories) and is extended in place.
    """
    chosen: list[str] = []
    for text in candidates:
        if len(chosen) >= quota:
            break
        if any(rouge_l_text(prev, text) > DIVERSITY_CUTOFF for prev in accepted_texts):
            continue
        accepted_texts.append(text)
        chosen.append(text)
    if len(chosen) < quota:
        raise InsufficientDiversity(
            f"only {len(chosen)}/{quota} candidates survive the ROUGE-L {DIVERSITY_CUTOFF} filter"
        )
    return chosen


# ---------------------------------------------------------------------------
# Shared vocabulary
# ---------------------------------------------------------------------------

_TOPICS = [
    "the deep ocean trenches", "ancient roman aqueducts", "the honeybee waggle dance",
    "volcanoes in iceland", "the history of chess", "migrating monarch butterflies",
    "how sourdough bread rises", "the rings of saturn", "medieval castle sieges",
    "octopus camouflage tricks", "the first moon landing", "glacier caves in patagonia",
    "samurai armor design", "the great barrier reef", "lighthouse keepers of old",
    "desert nomad traditions", "the invention of paper", "northern lights physics",
    "clockwork automata", "tea ceremonies in kyoto", "carnivorous plants",
    "the silk road caravans", "whale song dialects", "hot air balloon racing",
]

_ADJS = ["funny", "scary", "heartwarming", "mysterious", "adventurous", "gentle", "dramatic", "silly"]

_PLANNABLES = [
    "a garden makeover for spring", "my cousin's farewell brunch", "a rainy sunday with the kids",
    "a two week budget for groceries", "the neighborhood cleanup morning", "a quiet reading weekend",
    "grandpa's ninetieth birthday lunch", "a beginner jogging routine", "our board game tournament",
    "the school bake sale booth", "a balcony herb garden", "my home office reshuffle",
]

_RECOMMENDABLES = [
    "a podcast for long drives", "a documentary about volcanoes", "a cozy mystery novel",
    "a board game for four players", "an easy weeknight curry", "a museum exhibit worth seeing",
    "a calming playlist for studying", "a family friendly hiking trail",
]

_RELATIVES = ["grandmother", "college roommate", "little nephew", "neighbor", "aunt from lisbon", "book club"]
_TIMEWORDS = ["tomorrow", "this weekend", "next friday", "in a couple hours", "on sunday evening"]
_CHOICES = [
    ("piano lessons", "pottery classes"), ("a beach holiday", "a mountain cabin"),
    ("adopting a cat", "adopting a dog"), ("night classes", "online courses"),
    ("repainting the kitchen", "redoing the floors"), ("a road trip", "a train journey"),
]

# Human sensor phrases -> canonical ids.
SENSOR_PHRASES: dict[str, SensorId] = {
    "your chin": SensorId.CHIN,
    "the top of your head": SensorId.HEAD_TOP,
    "the back of your head": SensorId.HEAD_BACK,
    "your forehead": SensorId.HEAD_FRONT,
    "your right side": SensorId.HEAD_RIGHT,
    "your left side": SensorId.HEAD_LEFT,
    "the front left bumper": SensorId.BUMPER_FRONT_LEFT,
    "the front right bumper": SensorId.BUMPER_FRONT_RIGHT,
    "the rear left bumper": SensorId.BUMPER_REAR_LEFT,
    "the rear right bumper": SensorId.BUMPER_REAR_RIGHT,
}

# Bindable skill bank: name, trigger clause, manifest description, action op.
_BIND_SKILLS: list[tuple[str, str, str]] = [
    ("take_photo", "take a photo", "Capture a snapshot with the onboard camera."),
    ("say_hi", "say hi", "Speak a short friendly greeting."),
    ("show_sadness", "show sadness", "Display the sad expression with matching posture."),
    ("play_cute_sound", "make a cute sound", "Play a short endearing chirp."),
    ("read_daily_memo", "read my daily memo", "Read the stored daily memo aloud."),
    ("wave_arms", "wave your arms", "Wave both arms enthusiastically."),
    ("nod_head", "nod your head", "Nod the head up and down."),
    ("flash_rainbow", "flash rainbow lights", "Cycle the chest LED through rainbow colors."),
    ("greet_guest", "greet the guest", "Welcome an arriving visitor by voice."),
    ("play_lullaby", "play a soft lullaby", "Play a quiet lullaby track."),
    ("tell_weather", "tell me the weather", "Announce the cached weather summary."),
    ("cheer_loudly", "cheer loudly", "Give an excited celebratory cheer."),
]

_INVOKE_SKILLS: list[tuple[str, str, str]] = [
    ("play_workout_music", "play some good workout music", "Start an energetic workout playlist."),
    ("take_photo", "snap a quick picture", "Capture a snapshot with the onboard camera."),
    ("tell_weather", "give me the weather report", "Announce the cached weather summary."),
    ("read_daily_memo", "read out my daily memo", "Read the stored daily memo aloud."),
    ("flash_rainbow", "put on a little light show", "Cycle the chest LED through rainbow colors."),
    ("play_lullaby", "start the bedtime lullaby", "Play a quiet lullaby track."),
    ("wave_arms", "give everyone a big wave", "Wave both arms enthusiastically."),
    ("cheer_loudly", "celebrate with a loud cheer", "Give an excited celebratory cheer."),
]


def _skill_manifest(name: str, description: str) -> dict[str, Any]:
    op = "play_audio" if name.startswith("play") else "speak"
    if name in ("take_photo",):
        action = {"op": "capture_photo", "args": {}}
    elif name in ("show_sadness",):
        action = {"op": "display_emotion", "args": {"emotion": "Sadness"}}
    elif name in ("flash_rainbow",):
        action = {"op": "led", "args": {"color": "rainbow"}}
    elif name in ("wave_arms",):
        action = {"op": "move_arms", "args": {"left": 80, "right": 80}}
    elif name in ("nod_head",):
        action = {"op": "move_head", "args": {"pitch": 15, "yaw": 0, "roll": 0}}
    elif op == "play_audio":
        action = {"op": "play_audio", "args": {"track": name}}
    else:
        action = {"op": "speak", "args": {"text": description, "rate": 1.0, "emotion": "Neutral"}}
    return {"name": name, "description": description, "params": {}, "actions": [action]}


def bind_skill_manifests() -> list[dict[str, Any]]:
    manifests: dict[str, dict[str, Any]] = {}
    for name, _, description in _BIND_SKILLS + _INVOKE_SKILLS:
        manifests.setdefault(name, _skill_manifest(name, description))
    return list(manifests.values())


# ---------------------------------------------------------------------------
# Route suite
# ---------------------------------------------------------------------------

def _route_candidates(category: str, rng: random.Random) -> list[str]:
    out: list[str] = []
    if category == "sia-easy":
        for topic in _TOPICS:
            out.append(f"tell me a {rng.choice(_ADJS)} story about {topic}")
            out.append(f"give me a short rundown of {topic}")
            out.append(f"let's chat about {topic} while i tidy up")
        for item in _RECOMMENDABLES:
            out.append(f"could you recommend {item}")
        for item in _PLANNABLES:
            out.append(f"help me plan {item}")
    elif category == "sia-hard":
        out += [
            "work completely wore me out today, maybe you could lift my spirits somehow",
            "lately i cannot sleep well, perhaps we could figure out an evening wind-down together",
            "the kids are bored of our usual games, brainstorm some fresh ideas with me",
            "i promised a toast at the wedding and my mind has gone blank, get me started",
            "dinner guests keep cancelling on me, help me rethink how i host these evenings",
            "something about my week feels disorganized, walk me through straightening it out",
            "grandma's stories deserve saving somehow, what would be a gentle way to record them",
            "our budget never survives the month, sit with me and find where it leaks",
            "i moved to a new town and making friends feels impossible lately",
            "every conversation with my teenager turns into an argument, advise me",
            "the garden looks tired and i lack inspiration for what to grow next",
            "packing for three climates in one suitcase is defeating me",
            "my presentation tomorrow feels flat, punch it up with me",
            "we adopted a rescue dog who chews everything, what routine might calm him",
            "holiday cards went unsent again, devise a system so december stops ambushing me",
            "somebody gifted me a sourdough starter and i am frankly intimidated",
            "the attic is a museum of clutter, motivate me through clearing it",
            "i want to surprise my partner for our anniversary but every idea feels stale",
        ]
        for relative in rng.sample(_RELATIVES, 3):
            timeword = rng.choice(_TIMEWORDS)
            out.append(f"my {relative} arrives {timeword} and i have no idea how to keep everyone entertained")
        for a, b in rng.sample(_CHOICES, 3):
            out.append(f"i keep going back and forth between {a} and {b}, can we reason it out")
    elif category == "pia-easy":
        for phrase, _sensor in SENSOR_PHRASES.items():
            name, clause, _ = rng.choice(_BIND_SKILLS)
            out.append(f"when i touch {phrase}, {clause}")
        for _name, clause, _ in _INVOKE_SKILLS:
            out.append(f"please {clause} right now")
            out.append(f"go ahead and {clause}")
    else:  # pia-hard
        phrases = list(SENSOR_PHRASES)
        for _ in range(40):
            s1, s2 = rng.sample(phrases, 2)
            (n1, c1, _), (n2, c2, _) = rng.sample(_BIND_SKILLS, 2)
            style = rng.randrange(3)
            if style == 0:
                out.append(f"when i tap {s1}, {c1}; press {s2} to {c2}")
            elif style == 1:
                out.append(f"set things up so touching {s1} makes you {c1} and bumping {s2} makes you {c2}")
            else:
                out.append(f"i want {s1} to trigger you to {c1}, plus {c2} whenever {s2} is pressed")
        out += [
            "stop reacting when i touch the back of your head",
            "undo whatever the chin sensor is wired to do",
        ]
    rng.shuffle(out)
    # dedupe preserving order
    seen: set[str] = set()
    unique = [t for t in out if not (t in seen or seen.add(t))]
    return unique


def generate_route(n: int = 50, seed: int = 7) -> Suite:
    """Instances with PIA/SIA ground truth, ~58/42 split at any scale."""
    rng = random.Random(seed)
    n_sia = round(n * 0.58)
    n_pia = n - n_sia
    quotas = {
        "sia-easy": n_sia - n_sia // 2,
        "sia-hard": n_sia // 2,
        "pia-easy": n_pia - n_pia // 2,
        "pia-hard": n_pia // 2,
    }
    suite = Suite(name="route", seed=seed, params={"n": n})
    accepted: list[str] = []
    counter = 0
    for category, quota in quotas.items():
        texts = select_diverse(_route_candidates(category, rng), quota, accepted)
        target = "SIA" if category.startswith("sia") else "PIA"
        for text in texts:
            counter += 1
            suite.instances.append(
                SuiteInstance(
                    id=f"route-{counter:03d}", text=text, category=category,
                    expected={"target": target},
                )
            )
            suite.rules.append(
                Rule(
                    schema_id=SCHEMA_ROUTE,
                    exact=text,
                    output={"target": target, "rationale": f"generated {category} case"},
                )
            )
    return suite


# ---------------------------------------------------------------------------
# Sensorbind suite
# ---------------------------------------------------------------------------

def _bind_clause(style: int, phrase: str, clause: str) -> str:
    if style == 0:
        return f"when i tap {phrase}, {clause}"
    if style == 1:
        return f"whenever i touch {phrase}, please {clause}"
    if style == 2:
        return f"if i press {phrase}, i want you to {clause}"
    return f"every time i bump {phrase}, {clause}"


_INVOKE_PATTERNS = [
    "please {clause} right now",
    "i'm tidying the living room, {clause} while i work",
    "we have company tonight, {clause} before they arrive",
    "go ahead and {clause}",
]


def generate_sensorbind(n: int = 40, seed: int = 7) -> Suite:
    """Easy = one binding or one invocation; hard = multi-binding, 2-4 clauses."""
    if n % 2:
        raise ValueError("n must be even (easy/hard halves)")
    rng = random.Random(seed)
    suite = Suite(name="sensorbind", seed=seed, params={"n": n})
    suite.skills = bind_skill_manifests()
    accepted: list[str] = []
    phrases = list(SENSOR_PHRASES)

    easy_candidates: list[tuple[str, list[dict[str, Any]]]] = []
    for phrase in phrases:
        for style in range(4):
            name, clause, _ = rng.choice(_BIND_SKILLS)
            text = _bind_clause(style, phrase, clause)
            commands = [{"command": "BIND", "sensor": SENSOR_PHRASES[phrase].value, "skill": name}]
            easy_candidates.append((text, commands))
    for name, clause, _ in _INVOKE_SKILLS:
        for pattern in rng.sample(_INVOKE_PATTERNS, 2):
            text = pattern.format(clause=clause)
            easy_candidates.append((text, [{"command": "INVOKE", "skill": name, "args": {}}]))
    rng.shuffle(easy_candidates)

    hard_candidates: list[tuple[str, list[dict[str, Any]]]] = []
    for _ in range(n * 6):
        k = rng.choice([2, 2, 3, 3, 4])
        chosen_phrases = rng.sample(phrases, k)
        chosen_skills = rng.sample(_BIND_SKILLS, k)
        clauses = [
            _bind_clause(rng.randrange(4), phrase, skill[1])
            for phrase, skill in zip(chosen_phrases, chosen_skills)
        ]
        text = "; ".join(clauses)
        commands = [
            {"command": "BIND", "sensor": SENSOR_PHRASES[phrase].value, "skill": skill[0]}
            for phrase, skill in zip(chosen_phrases, chosen_skills)
        ]
        hard_candidates.append((text, commands))

    counter = 0
    for category, candidates in (("easy", easy_candidates), ("hard", hard_candidates)):
        by_text = {text: commands for text, commands in candidates}
        texts = select_diverse(list(by_text), n // 2, accepted)
        for text in texts:
            counter += 1
            commands = by_text[text]
            suite.instances.append(
                SuiteInstance(
                    id=f"bind-{counter:03d}", text=text, category=category,
                    expected={"commands": commands},
                )
            )
            suite.rules.append(Rule(schema_id=SCHEMA_PIA, exact=text, output={"commands": commands}))
    return suite


# ---------------------------------------------------------------------------
# Taskparser suite
# ---------------------------------------------------------------------------

_SCENARIOS: list[dict[str, Any]] = [
    {
        "task": "Plan a birthday dinner for dad",
        "open": "hey misty, i want to plan a birthday dinner for dad. book a table for six and have dinner start at 8:00 PM",
        "details": ["book a table for six", "start at 8:00 PM"],
        "replace": ("start at 7:00 PM", "let's move dinner to start at 7:00 PM instead"),
        "append": ("bring birthday candles", "oh, and someone must bring birthday candles"),
        "delete": ("book a table for six", "drop the bit about booking a table for six, we'll eat at home"),
    },
    {
        "task": "Organize a weekend picnic in the park",
        "open": "misty, help me organize a weekend picnic in the park. we leave around noon and should pack the blue blanket",
        "details": ["leave around noon", "pack the blue blanket"],
        "replace": ("leave around 1:00 PM", "actually we will leave around 1:00 PM"),
        "append": ("invite the neighbors", "also remember to invite the neighbors"),
        "delete": ("pack the blue blanket", "forget the blue blanket, it's being washed"),
    },
    {
        "task": "Prepare a study schedule for finals",
        "open": "i need to prepare a study schedule for finals. algebra gets two hours daily and review ends by friday",
        "details": ["algebra two hours daily", "review ends by friday"],
        "replace": ("algebra three hours daily", "bump algebra to three hours daily"),
        "append": ("add flashcards for chemistry", "could you add flashcards for chemistry"),
        "delete": ("review ends by friday", "scratch the friday deadline for review"),
    },
    {
        "task": "Plan a movie night with friends",
        "open": "let's plan a movie night with friends. screening begins at 9:00 PM and snacks are popcorn only",
        "details": ["screening begins at 9:00 PM", "snacks are popcorn only"],
        "replace": ("screening begins at 8:30 PM", "make the screening begin at 8:30 PM"),
        "append": ("set up the projector early", "we should set up the projector early"),
        "delete": ("snacks are popcorn only", "never mind the popcorn only rule"),
    },
    {
        "task": "Arrange the garage cleanup",
        "open": "misty, arrange the garage cleanup for me. donate the old bikes and finish before lunch",
        "details": ["donate the old bikes", "finish before lunch"],
        "replace": ("finish before dinner", "we won't manage by noon, finish before dinner"),
        "append": ("label the storage boxes", "please include labeling the storage boxes"),
        "delete": ("donate the old bikes", "my brother wants the old bikes, so skip donating them"),
    },
    {
        "task": "Plan grandma's garden tea party",
        "open": "help me plan grandma's garden tea party. seat eight guests and serve chamomile first",
        "details": ["seat eight guests", "serve chamomile first"],
        "replace": ("seat ten guests", "two more people rsvp'd, seat ten guests"),
        "append": ("borrow folding chairs", "we likely must borrow folding chairs"),
        "delete": ("serve chamomile first", "leave out the chamomile-first idea"),
    },
    {
        "task": "Draft a packing list for the ski trip",
        "open": "draft a packing list for the ski trip. rent skis at the lodge and pack thermal socks",
        "details": ["rent skis at the lodge", "pack thermal socks"],
        "replace": ("rent skis in town", "cheaper option found, rent skis in town"),
        "append": ("bring the gopro", "and bring the gopro for the slopes"),
        "delete": ("pack thermal socks", "i found my thermal socks are torn, remove that"),
    },
    {
        "task": "Set up the book club meeting",
        "open": "set up the book club meeting please. discuss chapter five and host at riverside cafe",
        "details": ["discuss chapter five", "host at riverside cafe"],
        "replace": ("discuss chapter six", "everyone read ahead, discuss chapter six"),
        "append": ("order extra espresso", "maybe order extra espresso for the table"),
        "delete": ("host at riverside cafe", "riverside cafe is closed, cut that part"),
    },
    {
        "task": "Plan the aquarium visit with the twins",
        "open": "plan the aquarium visit with the twins. catch the shark feeding and leave by 4:00 PM",
        "details": ["catch the shark feeding", "leave by 4:00 PM"],
        "replace": ("leave by 5:00 PM", "traffic clears later, leave by 5:00 PM"),
        "append": ("buy the combo tickets", "remember to buy the combo tickets online"),
        "delete": ("catch the shark feeding", "the shark feeding is cancelled, take it off"),
    },
    {
        "task": "Coordinate the charity bake sale",
        "open": "coordinate the charity bake sale with me. bake lemon squares and set up by 9:00 AM",
        "details": ["bake lemon squares", "set up by 9:00 AM"],
        "replace": ("bake oatmeal cookies", "lemons are pricey, bake oatmeal cookies"),
        "append": ("print the price signs", "someone should print the price signs"),
        "delete": ("set up by 9:00 AM", "the venue opens late, no 9:00 AM setup"),
    },
    {
        "task": "Plan a stargazing evening on the hill",
        "open": "plan a stargazing evening on the hill. borrow the telescope and check the cloud forecast",
        "details": ["borrow the telescope", "check the cloud forecast"],
        "replace": ("borrow the binoculars", "telescope is booked, borrow the binoculars"),
        "append": ("pack warm cocoa", "let's pack warm cocoa as well"),
        "delete": ("check the cloud forecast", "skip checking the cloud forecast, sky is clear"),
    },
    {
        "task": "Organize the spring yard sale",
        "open": "organize the spring yard sale. price items on saturday and advertise on the town board",
        "details": ["price items on saturday", "advertise on the town board"],
        "replace": ("price items on sunday", "saturday is busy, price items on sunday"),
        "append": ("prepare a cash float", "we need to prepare a cash float"),
        "delete": ("advertise on the town board", "the town board is full, drop that ad"),
    },
]

_UPGRADE_PHRASES = [
    "this is getting intricate, switch to your smarter model",
    "use the bigger brain for this one please",
    "i need deeper reasoning, go to the powerful model",
    "upgrade yourself for the rest of this task",
]
_DOWNGRADE_PHRASES = [
    "that's plenty of depth, switch back to the quick model",
    "downgrade to the light model now",
    "save energy and use the smaller model again",
]
_MEMORY_PHRASES = [
    "remember this plan for next time",
    "keep this task stored for later, please",
    "save what we worked out so you can reuse it",
]


def _dialogue_from_scenario(
    scenario: dict[str, Any],
    hard: bool,
    rng: random.Random,
    shift: dict[str, Any] | None,
) -> list[DialogueTurn]:
    turns = [
        DialogueTurn(
            scenario["open"],
            {"action": "NEW", "main_task": scenario["task"], "details": list(scenario["details"])},
        )
    ]
    new_unit, replace_text = scenario["replace"]
    turns.append(DialogueTurn(replace_text, {"action": "UPDATE", "details": [new_unit]}))
    if hard:
        append_unit, append_text = scenario["append"]
        turns.append(DialogueTurn(append_text, {"action": "UPDATE", "details": [append_unit]}))
    delete_unit, delete_text = scenario["delete"]
    turns.append(DialogueTurn(delete_text, {"action": "DELETE", "details": [delete_unit]}))
    if hard:
        turns.append(DialogueTurn(rng.choice(_UPGRADE_PHRASES), {"action": "UPGRADE"}))
        if shift is not None:
            turns.append(
                DialogueTurn(
                    shift["open"],
                    {"action": "NEW", "main_task": shift["task"], "details": list(shift["details"])},
                )
            )
        turns.append(DialogueTurn(rng.choice(_DOWNGRADE_PHRASES), {"action": "DOWNGRADE"}))
        turns.append(DialogueTurn(rng.choice(_MEMORY_PHRASES), {"action": "MEMORY"}))
    return turns


def generate_taskparser(n_dialogues: int = 10, seed: int = 7) -> Suite:
    """Multi-turn dialogues with one expected action per turn (2:8 easy/hard)."""
    if n_dialogues < 2:
        raise ValueError("need at least 2 dialogues")
    if n_dialogues > len(_SCENARIOS):
        raise InsufficientDiversity(
            f"scenario bank holds {len(_SCENARIOS)} dialogues, asked for {n_dialogues}"
        )
    rng = random.Random(seed)
    n_easy = max(1, round(n_dialogues * 0.2))
    scenarios = rng.sample(_SCENARIOS, n_dialogues)
    suite = Suite(name="taskparser", seed=seed, params={"n_dialogues": n_dialogues})
    accepted: list[str] = []
    for i, scenario in enumerate(scenarios):
        hard = i >= n_easy
        shift = None
        if hard:
            leftovers = [s for s in _SCENARIOS if s not in scenarios] or [
                s for s in scenarios if s is not scenario
            ]
            shift = rng.choice(leftovers)
        turns = _dialogue_from_scenario(scenario, hard, rng, shift)
        joined = " ".join(turn.text for turn in turns)
        select_diverse([joined], 1, accepted)  # dialogue-level diversity check
        suite.instances.append(
            SuiteInstance(
                id=f"dlg-{i + 1:03d}",
                text=joined,
                category="hard" if hard else "easy",
                expected={"n_turns": len(turns)},
                turns=turns,
            )
        )
        for turn in turns:
            suite.rules.append(Rule(schema_id=SCHEMA_SIA, exact=turn.text, output=dict(turn.expected)))
    return suite


# ---------------------------------------------------------------------------
# Fastthinking suite
# ---------------------------------------------------------------------------

_EMOTION_CYCLE = ["Neutral", "Happiness", "Surprise", "Happiness"]

_FAST_CLUSTERS: list[tuple[str, list[str]]] = [
    ("Plan a day trip to New York City", [
        "hi misty, i'd like to plan a day trip to new york city for tomorrow",
        "map out how i should spend tomorrow in manhattan",
        "put together an itinerary covering the big apple's highlights",
        "organize my sightseeing hours around nyc",
        "sort out a one day visit schedule for new york",
    ]),
    ("Tell a ghost story", [
        "tell me a ghost story",
        "i want something spooky tonight, a tale with restless spirits",
        "share a creepy campfire legend about a haunted manor",
        "got anything scary involving phantoms and old attics",
        "narrate a chilling yarn where a specter appears",
    ]),
    ("Play relaxing piano music", [
        "play relaxing piano music",
        "put on some calm keys so i can unwind",
        "i need gentle instrumental background sound for reading",
        "start a soothing keyboard playlist",
        "let soft ivories fill the room please",
    ]),
    ("Plan a healthy weekly meal prep", [
        "plan a healthy weekly meal prep for me",
        "lay out nutritious lunches i can batch cook on sunday",
        "i want seven days of balanced dinners organized ahead",
        "set up my clean eating menu for the coming week",
        "figure out wholesome batch recipes to carry me through friday",
    ]),
    ("Recommend a science fiction book", [
        "recommend a science fiction book",
        "which sci-fi novel should i read next",
        "point me toward something great about space travel and androids",
        "i finished my last paperback, suggest futuristic reading",
        "name a classic story set among the stars worth my time",
    ]),
    ("Plan a birthday party for my daughter", [
        "plan a birthday party for my daughter",
        "help me throw a celebration for my little girl turning six",
        "organize games, cake and guests for the kid's big day",
        "my daughter's birthday needs arranging, where do we start",
        "set up a fun bash for her sixth year",
    ]),
    ("Give a morning motivation pep talk", [
        "give me a morning motivation pep talk",
        "fire me up before this long workday",
        "i need encouraging words to get out of bed",
        "deliver something rousing while i drink coffee",
        "boost my spirits for the day ahead, coach",
    ]),
    ("Summarize today's technology news", [
        "summarize today's technology news",
        "what happened in the gadget world this morning",
        "catch me up on the latest chip and software headlines",
        "brief me quickly on current tech developments",
        "run through the big stories from silicon valley today",
    ]),
    ("Teach me basic spanish greetings", [
        "teach me basic spanish greetings",
        "how do people say hello and goodbye in madrid",
        "i want to learn simple phrases like buenos dias",
        "coach me through introducing myself en espanol",
        "help me pick up everyday salutations from spain",
    ]),
    ("Help me write a thank you note", [
        "help me write a thank you note",
        "i owe aunt marie gratitude for the quilt, draft something",
        "compose a short message of appreciation for my mentor",
        "what should i say to thank the rescue team",
        "assist me in penning a grateful card",
    ]),
    ("Plan a weekend camping trip by the lake", [
        "plan a weekend camping trip by the lake",
        "organize two nights under canvas near the water",
        "i want tents, firewood and fishing sorted for saturday",
        "map the gear list for sleeping outdoors at the shore",
        "arrange our little wilderness escape by the reservoir",
    ]),
    ("Tell a bedtime story about dragons", [
        "tell a bedtime story about dragons",
        "my son wants winged fire-breathers before sleep",
        "spin a gentle nighttime tale with a friendly wyrm",
        "something drowsy featuring scales and castles please",
        "send the kids off to dreams with a dragon adventure",
    ]),
    ("Suggest indoor exercises for rainy days", [
        "suggest indoor exercises for rainy days",
        "what workouts fit inside my small apartment",
        "the weather ruined my jog, give me living room moves",
        "i need ways to stay active without leaving home",
        "list sweat sessions that skip the soggy outdoors",
    ]),
    ("Plan a surprise anniversary dinner", [
        "plan a surprise anniversary dinner",
        "help me secretly arrange a romantic evening for my wife",
        "candles, her favorite pasta and no spoilers, organize it",
        "i want to mark ten years together with a hidden celebration",
        "coordinate a hush-hush meal for our special date",
    ]),
    ("Explain how rainbows form", [
        "explain how rainbows form",
        "why do arcs of color appear after storms",
        "walk me through sunlight bending inside raindrops",
        "what makes the sky paint those bands after a shower",
        "give me the physics behind that colorful bow",
    ]),
    ("Tell the story of Three Little Pig", [
        "tell me the story of three little pig",
        "recount the fable with straw, sticks and bricks",
        "my niece wants the one about the huffing puffing wolf",
        "share that classic porcine housing tale",
        "narrate the pigs versus wolf adventure",
    ]),
]


def _cluster_script(canonical: str, index: int) -> dict[str, Any]:
    texts = [
        f"Let's get started on this: {canonical.lower()}.",
        f"Here is the plan I put together for you, step by step.",
        f"I also found a nice touch to include, you will like it.",
        f"All set! I wrapped up everything for: {canonical.lower()}.",
    ]
    return {
        "utterances": [
            {"text": text, "emotion": _EMOTION_CYCLE[i % len(_EMOTION_CYCLE)]}
            for i, text in enumerate(texts)
        ]
    }


def generate_fastthinking(k: int = 12, seed: int = 7) -> Suite:
    """k canonical tasks x 5 surface variants, plus replayable scripts."""
    if k < 2:
        raise ValueError("need at least 2 clusters")
    if k > len(_FAST_CLUSTERS):
        raise InsufficientDiversity(
            f"canonical bank holds {len(_FAST_CLUSTERS)} tasks, asked for {k}"
        )
    rng = random.Random(seed)
    chosen = rng.sample(range(len(_FAST_CLUSTERS)), k)
    suite = Suite(name="fastthinking", seed=seed, params={"k": k, "variants": 5})
    accepted: list[str] = []
    counter = 0
    for cluster_id, bank_index in enumerate(chosen):
        canonical, variants = _FAST_CLUSTERS[bank_index]
        script = _cluster_script(canonical, cluster_id)
        suite.clusters.append(
            Cluster(cluster_id=cluster_id, canonical=canonical, variants=list(variants), script=script)
        )
        suite.rules.append(
            Rule(schema_id=SCHEMA_ROUTE, exact=canonical, output={"target": "SIA", "rationale": "dialogue"})
        )
        suite.rules.append(
            Rule(
                schema_id=SCHEMA_SIA,
                exact=canonical,
                output={"action": "NEW", "main_task": canonical, "details": []},
            )
        )
        suite.rules.append(
            Rule(schema_id=SCHEMA_SCRIPT, pattern=f"task: {canonical.casefold()}*", output=script)
        )
        for variant in variants:
            counter += 1
            select_diverse([variant], 1, accepted)  # enforce global pairwise diversity
            suite.instances.append(
                SuiteInstance(
                    id=f"fast-{counter:03d}", text=variant, category="variant",
                    expected={"cluster_id": cluster_id, "canonical": canonical},
                )
            )
            suite.rules.append(
                Rule(schema_id=SCHEMA_ROUTE, exact=variant, output={"target": "SIA", "rationale": "dialogue"})
            )
            suite.rules.append(
                Rule(
                    schema_id=SCHEMA_SIA,
                    exact=variant,
                    output={"action": "NEW", "main_task": canonical, "details": []},
                )
            )
    return suite


# ---------------------------------------------------------------------------
# Toolext suite
# ---------------------------------------------------------------------------

_TOOLEXT_PARTS: list[tuple[str, list[str]]] = [
    ("play", ["jazz standards", "lofi beats", "ocean waves", "morning radio", "party anthems",
              "birdsong loops", "rain sounds", "swing classics", "harp arpeggios", "choir hymns"]),
    ("announce", ["the weather outlook", "today's headlines", "the bus timetable", "the grocery list",
                  "upcoming birthdays", "the dinner menu", "stock alerts", "pollen levels",
                  "traffic conditions", "the moon phase"]),
    ("recite", ["a haiku", "a limerick", "famous quotes", "the alphabet backwards", "multiplication tables",
                "a tongue twister", "morse code basics", "kitchen conversions", "capital cities", "star names"]),
    ("hum", ["a waltz", "a sea shanty", "a lullaby melody", "a marching beat", "a jingle",
             "a blues riff", "a carol", "an anthem", "a tango line", "a folk tune"]),
    ("report", ["battery status", "network health", "sensor diagnostics", "storage usage", "uptime figures",
                "motor temperatures", "firmware version", "error counters", "calibration state", "queue depth"]),
    ("flash", ["emergency red", "calming teal", "a strobe pattern", "slow amber pulses", "disco colors",
               "soft moonlight white", "alternating stripes", "a heartbeat rhythm", "ocean blues", "sunset hues"]),
    ("mimic", ["a cat's meow", "an owl hoot", "a train whistle", "a doorbell chime", "applause",
               "a drumroll", "radio static", "a rooster crow", "wind gusts", "a ticking clock"]),
    ("narrate", ["a space voyage", "a jungle trek", "an undersea dive", "a desert crossing", "a polar expedition",
                 "a mountain ascent", "a castle tour", "a river journey", "a city stroll", "a cave exploration"]),
    ("sing", ["happy birthday", "a scale exercise", "an opera phrase", "a nursery rhyme", "a yodel",
              "a round of do-re-mi", "a barbershop line", "a chant", "a fanfare", "a serenade"]),
    ("describe", ["the room layout", "my calendar today", "the photo i just took", "the nearest exit",
                  "its favorite color", "the charging dock", "what it can do", "the last visitor",
                  "the current song", "the house rules"]),
]

_QUERY_PATTERNS = [
    "please {phrase} right away",
    "can you {phrase} for me",
    "time to {phrase}, don't you think",
    "i need you to {phrase} now",
    "go ahead and {phrase}",
    "would you kindly {phrase}",
    "misty, {phrase} at once",
    "let's have you {phrase}",
    "how about you {phrase} this instant",
    "be a dear and {phrase}",
    "your next job is to {phrase}",
    "whenever you're set, {phrase}",
]


def _toolext_combos() -> list[tuple[str, str]]:
    combos: list[tuple[str, str]] = []
    for verb, objects in _TOOLEXT_PARTS:
        for obj in objects:
            combos.append((verb, obj))
    return combos


def generate_toolext(scale: int = 30, seed: int = 7) -> Suite:
    """scale skill manifests described solely by docstring, one query each."""
    combos = _toolext_combos()
    if scale > len(combos):
        raise InsufficientDiversity(f"skill bank holds {len(combos)} tools, asked for {scale}")
    rng = random.Random(seed)
    chosen = rng.sample(combos, scale)
    suite = Suite(name="toolext", seed=seed, params={"scale": scale})
    accepted: list[str] = []
    # One pattern cycle per verb keeps same-verb queries structurally distinct.
    pattern_order: dict[str, list[int]] = {}
    pattern_next: dict[str, int] = {}
    for i, (verb, obj) in enumerate(chosen):
        slug = "_".join(f"{verb} {obj}".replace("'", "").split())
        phrase = f"{verb} {obj}"
        description = f"Use this tool to {phrase}; it runs the matching onboard routine."
        op = "play_audio" if verb in ("play", "hum", "sing", "mimic") else "speak"
        if verb == "flash":
            action = {"op": "led", "args": {"color": obj}}
        elif op == "play_audio":
            action = {"op": "play_audio", "args": {"track": slug}}
        else:
            action = {"op": "speak", "args": {"text": f"Here goes: {phrase}.", "rate": 1.0, "emotion": "Neutral"}}
        suite.skills.append({"name": slug, "description": description, "params": {}, "actions": [action]})
        if verb not in pattern_order:
            order = list(range(len(_QUERY_PATTERNS)))
            rng.shuffle(order)
            pattern_order[verb] = order
            pattern_next[verb] = 0
        query = None
        for attempt in range(len(_QUERY_PATTERNS)):
            index = pattern_order[verb][(pattern_next[verb] + attempt) % len(_QUERY_PATTERNS)]
            candidate = _QUERY_PATTERNS[index].format(phrase=phrase)
            if not any(rouge_l_text(prev, candidate) > DIVERSITY_CUTOFF for prev in accepted):
                query = candidate
                pattern_next[verb] += attempt + 1
                break
        if query is None:
            raise InsufficientDiversity(f"no diverse query pattern left for {slug}")
        accepted.append(query)
        suite.instances.append(
            SuiteInstance(
                id=f"tool-{i + 1:03d}", text=query, category=f"scale-{scale}",
                expected={"skill": slug},
            )
        )
        suite.rules.append(
            Rule(
                schema_id=SCHEMA_PIA,
                exact=query,
                output={"commands": [{"command": "INVOKE", "skill": slug, "args": {}}]},
            )
        )
    return suite


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

_GENERATORS: dict[str, Callable[..., Suite]] = {
    "route": generate_route,
    "sensorbind": generate_sensorbind,
    "taskparser": generate_taskparser,
    "fastthinking": generate_fastthinking,
    "toolext": generate_toolext,
}


def generate_suite(name: str, seed: int = 7, **params: Any) -> Suite:
    try:
        generator = _GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown suite: {name!r}") from None
    return generator(seed=seed, **params)
