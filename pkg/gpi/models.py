from django.db import models
import uuid


class ExperimentRun(models.Model):
    MODE_CHOICES = [
        ('centralized', 'Centralized'),
        ('distributed', 'Distributed'),
    ]

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    mode = models.CharField(max_length=20, choices=MODE_CHOICES)
    graph_label = models.CharField(max_length=255)
    n = models.PositiveIntegerField()
    delta = models.FloatField()
    epsilon = models.FloatField()
    # null when the run never produced a finite estimate
    estimate = models.FloatField(null=True, blank=True)
    scenario = models.CharField(max_length=20, blank=True)
    iterations = models.PositiveIntegerField(default=0)
    converged = models.BooleanField(default=True)
    summary = models.JSONField(default=dict)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    @classmethod
    def record(cls, outcome):
        summary = outcome.summary
        if outcome.mode == 'centralized':
            estimate, scenario = summary.get('estimate'), summary.get('scenario') or ''
        else:
            finite = [e for e in summary.get('estimates', []) if e is not None]
            estimate = sum(finite) / len(finite) if finite else None
            scenarios = set(summary.get('scenarios', []))
            scenario = scenarios.pop() if len(scenarios) == 1 else 'mixed'
        return cls.objects.create(
            mode=outcome.mode,
            graph_label=outcome.source.label,
            n=outcome.source.graph.n,
            delta=outcome.config.delta,
            epsilon=outcome.config.epsilon,
            estimate=estimate,
            scenario=scenario,
            iterations=summary.get('iterations', 0),
            converged=summary.get('converged', True),
            summary=summary,
        )

    def __str__(self):
        return f"{self.mode} run on {self.graph_label} ({self.created_at:%Y-%m-%d %H:%M})"
