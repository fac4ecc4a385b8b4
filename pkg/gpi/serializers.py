import math

from rest_framework import serializers

from .exceptions import GraphFormatError
from .graphs import from_json
from .models import ExperimentRun
from .utils import parse_gen_option, parse_vector


class FiniteFloatField(serializers.FloatField):
    """Renders NaN and infinities as null so the output stays strict JSON."""

    def to_representation(self, value):
        if value is None:
            return None
        value = float(value)
        return value if math.isfinite(value) else None


class EnumValueField(serializers.Field):
    def to_representation(self, value):
        return getattr(value, 'value', value)


class VectorField(serializers.Field):
    """Accepts a list of numbers or a comma separated string."""

    def to_internal_value(self, data):
        is_valid, result = parse_vector(data)
        if not is_valid:
            raise serializers.ValidationError(result)
        return result

    def to_representation(self, value):
        return list(value)


class GraphSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=2)
    edges = serializers.ListField(child=serializers.ListField(min_length=3, max_length=3))

    def validate(self, data):
        try:
            data['graph'] = from_json({'n': data['n'], 'edges': data['edges']})
        except GraphFormatError as exc:
            raise serializers.ValidationError(str(exc))
        return data

    def to_representation(self, instance):
        return {"n": instance.n, "edges": [[s, d, w] for s, d, w in instance.edges]}


class ExperimentConfigSerializer(serializers.Serializer):
    SCHEDULES = ['adaptive', 'linear', 'fixed']

    graph = serializers.CharField(required=False, allow_blank=False)
    example = serializers.CharField(required=False)
    gen = serializers.CharField(required=False)
    graph_data = serializers.JSONField(required=False)
    delta = serializers.FloatField(required=False, allow_null=True)
    epsilon = serializers.FloatField(required=False, allow_null=True)
    seed = serializers.IntegerField(required=False, allow_null=True, min_value=0)
    x0 = VectorField(required=False, allow_null=True)
    max_iter = serializers.IntegerField(required=False, allow_null=True, min_value=3)
    schedule = serializers.ChoiceField(choices=SCHEDULES, required=False, allow_null=True)
    l_max = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    m_max = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    observer = serializers.ChoiceField(choices=['consensus', 'exact'], required=False, allow_null=True)
    with_oracle = serializers.BooleanField(required=False, default=False)

    def validate_delta(self, value):
        if value is not None and value <= 0:
            raise serializers.ValidationError("delta must be positive.")
        return value

    def validate_epsilon(self, value):
        if value is not None and value <= 0:
            raise serializers.ValidationError("epsilon must be positive.")
        return value

    def validate_graph_data(self, value):
        graph = GraphSerializer(data=value)
        if not graph.is_valid():
            raise serializers.ValidationError(graph.errors)
        return value

    def validate_gen(self, value):
        is_valid, result = parse_gen_option(value)
        if not is_valid:
            raise serializers.ValidationError(result)
        return result

    def validate(self, data):
        sources = [key for key in ('graph', 'example', 'gen', 'graph_data') if data.get(key) is not None]
        if len(sources) != 1:
            raise serializers.ValidationError(
                "Exactly one graph source is required: graph, example, gen or graph_data.")
        return data


class TraceRecordSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    d_check = FiniteFloatField()
    d_hat = FiniteFloatField()
    d = FiniteFloatField()
    lam_check = FiniteFloatField()
    lam_hat = FiniteFloatField()
    lam_tilde = FiniteFloatField()
    scenario = serializers.CharField()


class NodeTraceRecordSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    node = serializers.IntegerField()
    d_check = FiniteFloatField()
    d_hat = FiniteFloatField()
    d = FiniteFloatField()
    lam_check = FiniteFloatField()
    lam_hat = FiniteFloatField()
    lam_tilde = FiniteFloatField()
    scenario = serializers.CharField()


class MessageStatsSerializer(serializers.Serializer):
    rounds = serializers.IntegerField()
    messages = serializers.IntegerField()
    max_payload_scalars = serializers.IntegerField()
    total_scalars = serializers.IntegerField()


class CentralResultSerializer(serializers.Serializer):
    estimate = FiniteFloatField()
    scenario = EnumValueField()
    iterations = serializers.IntegerField()
    converged = serializers.BooleanField()


class DistResultSerializer(serializers.Serializer):
    estimates = serializers.ListField(child=FiniteFloatField())
    scenarios = serializers.ListField(child=EnumValueField())
    iterations = serializers.IntegerField()
    rounds = serializers.IntegerField()
    stats = MessageStatsSerializer()
    converged = serializers.BooleanField()


class OracleReportSerializer(serializers.Serializer):
    gac = FiniteFloatField()
    kind = EnumValueField()
    eigenvalues = serializers.SerializerMethodField()
    modified_eigenvalues = serializers.SerializerMethodField()
    modified_estimate = FiniteFloatField()
    max_indegree = FiniteFloatField()
    delta = FiniteFloatField()
    delta_interval = serializers.SerializerMethodField()
    assumption_suspect = serializers.BooleanField()

    # Helper function to render complex spectra as [re, im] pairs
    @staticmethod
    def _pairs(values):
        if values is None:
            return None
        return [[float(v.real), float(v.imag)] for v in values]

    def get_eigenvalues(self, obj):
        return self._pairs(obj.eigenvalues)

    def get_modified_eigenvalues(self, obj):
        return self._pairs(obj.modified_eigenvalues)

    def get_delta_interval(self, obj):
        interval = obj.delta_interval
        return list(interval) if interval is not None else None


class SweepRowSerializer(serializers.Serializer):
    epsilon = serializers.FloatField()
    iterations = serializers.IntegerField()
    estimate = FiniteFloatField()
    abs_error = FiniteFloatField()
    scenario = serializers.CharField()


class MonteCarloRowSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    trials = serializers.IntegerField()
    failures = serializers.IntegerField()
    mean_iterations = FiniteFloatField()
    mean_rounds = FiniteFloatField()
    std_rounds = FiniteFloatField()
    mean_baseline_rounds = FiniteFloatField()
    std_baseline_rounds = FiniteFloatField()


class ExperimentRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = ExperimentRun
        fields = ['id', 'mode', 'graph_label', 'n', 'delta', 'epsilon', 'estimate',
                  'scenario', 'iterations', 'converged', 'summary', 'created_at']
        read_only_fields = fields
