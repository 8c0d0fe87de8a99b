//! Word lists backing English morphology.

pub(super) struct Irregular {
    pub base: &'static str,
    pub past: &'static str,
    pub participle: &'static str,
}

macro_rules! irregulars {
    ($(($b:literal, $p:literal, $pp:literal)),* $(,)?) => {
        &[$(Irregular { base: $b, past: $p, participle: $pp }),*]
    };
}

const IRREGULAR: &[Irregular] = irregulars![
    ("be", "was", "been"),
    ("have", "had", "had"),
    ("do", "did", "done"),
    ("go", "went", "gone"),
    ("see", "saw", "seen"),
    ("eat", "ate", "eaten"),
    ("drink", "drank", "drunk"),
    ("hear", "heard", "heard"),
    ("find", "found", "found"),
    ("read", "read", "read"),
    ("write", "wrote", "written"),
    ("sit", "sat", "sat"),
    ("sleep", "slept", "slept"),
    ("run", "ran", "run"),
    ("lie", "lay", "lain"),
    ("stand", "stood", "stood"),
    ("fall", "fell", "fallen"),
    ("sing", "sang", "sung"),
    ("fly", "flew", "flown"),
    ("swim", "swam", "swum"),
    ("hit", "hit", "hit"),
    ("make", "made", "made"),
    ("take", "took", "taken"),
    ("come", "came", "come"),
    ("get", "got", "gotten"),
    ("give", "gave", "given"),
    ("know", "knew", "known"),
    ("think", "thought", "thought"),
    ("tell", "told", "told"),
    ("say", "said", "said"),
    ("become", "became", "become"),
    ("leave", "left", "left"),
    ("feel", "felt", "felt"),
    ("bring", "brought", "brought"),
    ("begin", "began", "begun"),
    ("keep", "kept", "kept"),
    ("hold", "held", "held"),
    ("buy", "bought", "bought"),
    ("teach", "taught", "taught"),
    ("catch", "caught", "caught"),
    ("fight", "fought", "fought"),
    ("win", "won", "won"),
    ("lose", "lost", "lost"),
    ("pay", "paid", "paid"),
    ("meet", "met", "met"),
    ("send", "sent", "sent"),
    ("build", "built", "built"),
    ("spend", "spent", "spent"),
    ("wear", "wore", "worn"),
    ("ride", "rode", "ridden"),
    ("drive", "drove", "driven"),
    ("throw", "threw", "thrown"),
    ("grow", "grew", "grown"),
    ("draw", "drew", "drawn"),
    ("break", "broke", "broken"),
    ("speak", "spoke", "spoken"),
    ("choose", "chose", "chosen"),
    ("forget", "forgot", "forgotten"),
    ("hide", "hid", "hidden"),
    ("bite", "bit", "bitten"),
    ("shake", "shook", "shaken"),
    ("steal", "stole", "stolen"),
    ("wake", "woke", "woken"),
    ("rise", "rose", "risen"),
    ("sell", "sold", "sold"),
    ("put", "put", "put"),
    ("cut", "cut", "cut"),
    ("let", "let", "let"),
    ("shut", "shut", "shut"),
    ("hurt", "hurt", "hurt"),
    ("set", "set", "set"),
    ("cost", "cost", "cost"),
    ("understand", "understood", "understood"),
    ("lead", "led", "led"),
    ("feed", "fed", "fed"),
    ("hang", "hung", "hung"),
    ("shoot", "shot", "shot"),
    ("sweep", "swept", "swept"),
    ("dig", "dug", "dug"),
    ("swing", "swung", "swung"),
    ("blow", "blew", "blown"),
    ("freeze", "froze", "frozen"),
    ("ring", "rang", "rung"),
    ("sink", "sank", "sunk"),
    ("shine", "shone", "shone"),
    ("bend", "bent", "bent"),
    ("lend", "lent", "lent"),
    ("light", "lit", "lit"),
    ("mean", "meant", "meant"),
    ("deal", "dealt", "dealt"),
    ("bear", "bore", "borne"),
    ("beat", "beat", "beaten"),
    ("bleed", "bled", "bled"),
    ("creep", "crept", "crept"),
    ("flee", "fled", "fled"),
    ("forgive", "forgave", "forgiven"),
    ("seek", "sought", "sought"),
    ("slide", "slid", "slid"),
    ("spin", "spun", "spun"),
    ("stick", "stuck", "stuck"),
    ("sting", "stung", "stung"),
    ("strike", "struck", "struck"),
    ("swear", "swore", "sworn"),
    ("tear", "tore", "torn"),
    ("weep", "wept", "wept"),
];

/// Inflected forms that are not derivable by suffix rules.
const EXTRA_FORMS: &[(&str, &str)] = &[
    ("am", "be"),
    ("is", "be"),
    ("are", "be"),
    ("were", "be"),
    ("has", "have"),
    ("does", "do"),
    ("goes", "go"),
];

pub(super) fn irregular(base: &str) -> Option<&'static Irregular> {
    IRREGULAR.iter().find(|i| i.base == base)
}

pub(super) fn irregular_base(form: &str) -> Option<&'static str> {
    if let Some((_, base)) = EXTRA_FORMS.iter().find(|(f, _)| *f == form) {
        return Some(base);
    }
    IRREGULAR
        .iter()
        .find(|i| i.past == form || i.participle == form)
        .map(|i| i.base)
}

/// Regular verbs recognised when splitting sentences. Irregular verbs are
/// recognised through the table above.
const REGULAR_VERBS: &[&str] = &[
    "act", "add", "howl", "agree", "allow", "answer", "appear", "arrive", "ask", "bake", "bark", "bathe",
    "believe", "belong", "bloom", "boil", "borrow", "bounce", "brush", "burn", "call", "carry",
    "change", "chase", "chat", "cheer", "chew", "chirp", "clean", "climb", "close", "collect",
    "comb", "complete", "complement", "cook", "copy", "count", "cover", "crawl", "create",
    "creak", "cross", "cry", "dance", "decide", "deliver", "destroy", "die", "drop", "dress",
    "dry", "echo", "end", "enjoy", "enter", "escape", "explain", "fill", "film", "finish", "fix",
    "flicker", "flow", "follow", "gather", "glow", "grab", "greet", "guess", "hate", "head",
    "help", "hibernate", "hike", "hop", "hope", "hug", "hum", "hunt", "hurry", "imagine",
    "invite", "jog", "join", "joke", "jump", "kick", "kill", "kiss", "knock", "land", "laugh",
    "learn", "lick", "like", "listen", "live", "look", "love", "mask", "melt", "migrate", "miss",
    "move", "need", "nest", "nibble", "obey", "open", "order", "orbit", "paint", "pass", "pick",
    "plan", "plant", "play", "pour", "pray", "precede", "prefer", "prepare", "pull", "purr",
    "push", "race", "rain", "reach", "refresh", "relax", "remain", "remember", "repair", "rest",
    "return", "roll", "rule", "rush", "rustle", "sail", "save", "scream", "share", "shimmer",
    "shop", "shout", "sketch", "ski", "skip", "smell", "smile", "sneeze", "snore", "snow",
    "solve", "start", "stay", "step", "stop", "streak", "stretch", "study", "stumble",
    "surf", "talk", "taste", "thank", "tick", "touch", "travel", "trip", "try", "turn",
    "twinkle", "type", "unlock", "unveil", "use", "visit", "wait", "walk", "want", "warm",
    "wash", "watch", "wave", "welcome", "whisper", "wilt", "wish", "wonder", "work", "worry",
    "yell", "afflict", "marry", "occur", "pet", "rob", "scare",
    "smoke", "sneak", "sew", "stare", "tickle", "wander", "whistle", "yawn",
];

pub(super) fn is_verb(base: &str) -> bool {
    REGULAR_VERBS.contains(&base) || irregular(base).is_some()
}

const IRREGULAR_PLURALS: &[(&str, &str)] = &[
    ("man", "men"),
    ("woman", "women"),
    ("child", "children"),
    ("person", "people"),
    ("mouse", "mice"),
    ("foot", "feet"),
    ("tooth", "teeth"),
    ("goose", "geese"),
    ("ox", "oxen"),
];

const UNCOUNTABLE: &[&str] = &[
    "fish", "sheep", "deer", "rice", "water", "corn", "food", "coffee", "wood", "earth", "music",
    "traffic", "lightning", "thunder", "rain", "snow", "breakfast", "dinner", "lunch", "tv",
];

const F_PLURALS: &[(&str, &str)] = &[
    ("leaf", "leaves"),
    ("wolf", "wolves"),
    ("knife", "knives"),
    ("life", "lives"),
    ("wife", "wives"),
    ("half", "halves"),
    ("shelf", "shelves"),
    ("loaf", "loaves"),
    ("thief", "thieves"),
    ("calf", "calves"),
];

const PLURAL_ONLY: &[&str] = &["pinenuts", "scissors", "pants", "news", "clothes"];

pub(super) fn irregular_plural(singular: &str) -> Option<&'static str> {
    IRREGULAR_PLURALS.iter().find(|(s, _)| *s == singular).map(|(_, p)| *p)
}

pub(super) fn irregular_singular(plural: &str) -> Option<&'static str> {
    IRREGULAR_PLURALS.iter().find(|(_, p)| *p == plural).map(|(s, _)| *s)
}

pub(super) fn is_uncountable(noun: &str) -> bool {
    UNCOUNTABLE.contains(&noun)
}

pub(super) fn is_plural_only(noun: &str) -> bool {
    PLURAL_ONLY.contains(&noun)
}

pub(super) fn f_plural(singular: &str) -> Option<String> {
    F_PLURALS
        .iter()
        .find(|(s, _)| *s == singular)
        .map(|(_, p)| p.to_string())
}

pub(super) fn f_singular(plural: &str) -> Option<String> {
    F_PLURALS
        .iter()
        .find(|(_, p)| *p == plural)
        .map(|(s, _)| s.to_string())
}
