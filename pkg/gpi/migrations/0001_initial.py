# Generated by Django 4.2.20 on 2026-10-17 09:12

from django.db import migrations, models
import uuid


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('mode', models.CharField(choices=[('centralized', 'Centralized'), ('distributed', 'Distributed')], max_length=20)),
                ('graph_label', models.CharField(max_length=255)),
                ('n', models.PositiveIntegerField()),
                ('delta', models.FloatField()),
                ('epsilon', models.FloatField()),
                ('estimate', models.FloatField(blank=True, null=True)),
                ('scenario', models.CharField(blank=True, max_length=20)),
                ('iterations', models.PositiveIntegerField(default=0)),
                ('converged', models.BooleanField(default=True)),
                ('summary', models.JSONField(default=dict)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
