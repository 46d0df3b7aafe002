import enum

# 退出码
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_NO_BRIDGE = 3
EXIT_NOT_SEPARATING = 4


class VerifyLevel(enum.Enum):
    quick = "quick"
    full = "full"

    @classmethod
    def has_value(cls, value):
        return value in cls._value2member_map_


# 各检验级别的随机样本数与网点数
VERIFY_SAMPLES = {VerifyLevel.quick: 20, VerifyLevel.full: 100}
VERIFY_NET_COUNT = {VerifyLevel.quick: 32, VerifyLevel.full: 128}
# 桥的限制检验至少用 100 个随机元素
VERIFY_BRIDGE_SAMPLES = {VerifyLevel.quick: 100, VerifyLevel.full: 200}
# verify 的检验组，按执行顺序排列
VERIFY_SUITES = ("algebra", "lipnorm", "nets", "bridge", "ghdist", "freefield")
# 可以注入的故障
INJECTIONS = ("bridge",)
# verify 报告表的列
VERIFY_COLUMNS = ["suite", "passed", "total", "failures"]

SWEEP_CSV = "sweep.csv"
SWEEP_JSON = "sweep.json"
NET_JSON = "net.json"

# ----------------------------------------------------------------------
# JSON 配置的 schema
_NUMBER_OR_PAIR = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}

# 实数组直接写嵌套列表，复数组写成 {"re": ..., "im": ...}
COMPLEX_ARRAY = {
    "oneOf": [
        {"type": "number"},
        {"type": "array"},
        {
            "type": "object",
            "properties": {"re": {}, "im": {}},
            "required": ["re"],
            "additionalProperties": False,
        },
    ]
}

ALGEBRA_SCHEMA = {
    "type": "object",
    "properties": {
        "type": {"enum": ["standard", "scalars", "diagonal", "full_matrix"]},
        "block_dims": {
            "type": "array",
            "items": {"type": "integer", "minimum": 1},
            "minItems": 1,
        },
        "n": {"type": "integer", "minimum": 1},
        "omega": COMPLEX_ARRAY,
    },
    "additionalProperties": False,
}

NORM_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["kernel", "effros_marechal", "weighted_entry"]},
        "T": COMPLEX_ARRAY,
        "truncation": {"type": "integer", "minimum": 1},
        "weights": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

LVNA_SCHEMA = {
    "type": "object",
    "properties": {"algebra": ALGEBRA_SCHEMA, "norm": NORM_SCHEMA},
    "required": ["algebra", "norm"],
    "additionalProperties": False,
}

BRIDGE_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["sum", "kernel", "iso", "coupler"]},
        "name": {"type": "string"},
        # iso：块置换与各块酉矩阵，缺省为恒等
        "permutation": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "unitaries": {"type": "array", "items": COMPLEX_ARRAY},
        # coupler：给定等距 U，或者优化
        "U": COMPLEX_ARRAY,
        "optimize": {"type": "boolean"},
        "budget": {"type": "integer", "minimum": 1},
        "restarts": {"type": "integer", "minimum": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

NETS_SCHEMA = {
    "type": "object",
    "properties": {
        "count": {"type": "integer", "minimum": 2},
        "probes": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

DIST_SCHEMA = {
    "type": "object",
    "properties": {
        "M": LVNA_SCHEMA,
        "N": LVNA_SCHEMA,
        "bridges": {"type": "array", "items": BRIDGE_SCHEMA, "minItems": 1},
        "nets": NETS_SCHEMA,
        "radii": {
            "type": "array",
            "items": {"type": ["number", "null"]},
            "minItems": 2,
            "maxItems": 2,
        },
        "seed": {"type": "integer", "minimum": 0},
    },
    "required": ["M", "N", "bridges"],
    "additionalProperties": False,
}

FREEFIELD_SCHEMA = {
    "type": "object",
    "properties": {
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "base_mass": {"type": "number", "minimum": 0},
        "masses": {
            "type": "array",
            "items": {"type": "number", "minimum": 0},
            "minItems": 1,
        },
        "momenta": {
            "type": "array",
            "items": {"type": "number", "minimum": 0},
            "minItems": 1,
        },
        "cutoff": {"type": "integer", "minimum": 0},
        "generators": {
            "type": "array",
            "items": {"type": "array", "items": _NUMBER_OR_PAIR, "minItems": 1},
            "minItems": 1,
        },
        "coefficient_map": {"enum": ["fixed", "mass_dependent"]},
        "lipnorm": {"enum": ["transported", "intrinsic"]},
        "reduce_to_separating": {"type": "boolean"},
        "net_count": {"type": "integer", "minimum": 2},
        "seed": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

NET_SCHEMA = {
    "type": "object",
    "properties": {
        "algebra": ALGEBRA_SCHEMA,
        "target": {
            "enum": [
                "positive_unit_ball_2x2",
                "positive_unit_ball",
                "unit_ball",
                "unit_sphere",
            ]
        },
        "count": {"type": "integer", "minimum": 2},
        "probes": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
    },
    "required": ["algebra", "target"],
    "additionalProperties": False,
}

SCHEMAS = {
    "dist": DIST_SCHEMA,
    "freefield": FREEFIELD_SCHEMA,
    "net": NET_SCHEMA,
}
